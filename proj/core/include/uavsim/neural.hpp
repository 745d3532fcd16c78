#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "uavsim/rng.hpp"

namespace uavsim {

/// Dense multilayer perceptron with rectified-linear hidden layers and a
/// linear output layer. Weights are (out x in) per layer. All arithmetic is
/// 64-bit for reproducibility.
struct QNetwork {
    std::vector<std::size_t> layer_sizes;   // e.g. {5, 128, 64, 7}
    std::vector<Eigen::MatrixXd> weights;   // layer_sizes.size() - 1 entries
    std::vector<Eigen::VectorXd> biases;

    /// Fan-in scaled uniform init, U(-sqrt(6/fan_in), +sqrt(6/fan_in)); zero biases.
    static QNetwork make(const std::vector<std::size_t>& sizes, Rng& rng);
    static QNetwork zeros(const std::vector<std::size_t>& sizes);

    std::size_t input_size() const { return layer_sizes.front(); }
    std::size_t output_size() const { return layer_sizes.back(); }
    std::size_t parameter_count() const;
    bool same_architecture(const QNetwork& other) const { return layer_sizes == other.layer_sizes; }
    bool all_finite() const;
};

/// Default controller architecture: 5-vector state in, one Q-value per action out.
QNetwork make_q_network(Rng& rng);

Eigen::VectorXd forward(const QNetwork& net, const Eigen::VectorXd& input);
/// Batched forward; one sample per row.
Eigen::MatrixXd forward(const QNetwork& net, const Eigen::MatrixXd& batch);

struct Gradients {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
};

/// Mean-squared-error loss over the taken-action outputs only, with
/// reverse-mode gradients. `targets[i]` is the scalar target for
/// `actions[i]` on row i of `batch`. Returns the loss.
double backprop(const QNetwork& net, const Eigen::MatrixXd& batch, const std::vector<int>& actions,
                const Eigen::VectorXd& targets, Gradients& out);

struct RmsPropState {
    double learning_rate = 1e-4;
    double decay = 0.99;
    double epsilon = 1e-8;
    std::vector<Eigen::MatrixXd> weight_acc;  // squared-gradient accumulators
    std::vector<Eigen::VectorXd> bias_acc;

    static RmsPropState make(const QNetwork& net, double learning_rate = 1e-4,
                             double decay = 0.99, double epsilon = 1e-8);
};

/// One optimisation step: backprop then RMSprop. Returns the pre-update loss.
/// Throws std::runtime_error when the loss or a gradient is non-finite.
double train_step(QNetwork& net, RmsPropState& opt, const Eigen::MatrixXd& batch,
                  const std::vector<int>& actions, const Eigen::VectorXd& targets);

/// Copies main's parameters into target. Throws std::invalid_argument on an
/// architecture mismatch.
void sync_target(const QNetwork& main, QNetwork& target);

// Flat binary network layout, little-endian:
//   "UQNW" | u32 version | u32 n_sizes | u32 sizes[n_sizes]
//   then per layer: f64 weights row-major (out x in), f64 biases (out).
inline constexpr std::uint32_t kNetworkFormatVersion = 1;

void save_network(const QNetwork& net, std::ostream& out);
void save_network(const QNetwork& net, const std::filesystem::path& path);
/// Throws std::runtime_error with the failing byte offset on truncation or a
/// malformed header.
QNetwork load_network(std::istream& in);
QNetwork load_network(const std::filesystem::path& path);

}  // namespace uavsim
