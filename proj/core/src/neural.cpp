#include "uavsim/neural.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "network serialization assumes a little-endian host");

namespace uavsim {

namespace {

void check_sizes(const std::vector<std::size_t>& sizes) {
    if (sizes.size() < 2) {
        throw std::invalid_argument("QNetwork: need at least input and output layers");
    }
    for (std::size_t s : sizes) {
        if (s == 0) throw std::invalid_argument("QNetwork: zero-width layer");
    }
}

}  // namespace

QNetwork QNetwork::make(const std::vector<std::size_t>& sizes, Rng& rng) {
    check_sizes(sizes);
    QNetwork net;
    net.layer_sizes = sizes;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const auto in = static_cast<Eigen::Index>(sizes[l]);
        const auto out = static_cast<Eigen::Index>(sizes[l + 1]);
        const double limit = std::sqrt(6.0 / static_cast<double>(sizes[l]));
        std::uniform_real_distribution<double> dist(-limit, limit);
        Eigen::MatrixXd w(out, in);
        for (Eigen::Index r = 0; r < out; ++r) {
            for (Eigen::Index c = 0; c < in; ++c) w(r, c) = dist(rng);
        }
        net.weights.push_back(std::move(w));
        net.biases.emplace_back(Eigen::VectorXd::Zero(out));
    }
    return net;
}

QNetwork QNetwork::zeros(const std::vector<std::size_t>& sizes) {
    check_sizes(sizes);
    QNetwork net;
    net.layer_sizes = sizes;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        net.weights.emplace_back(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(sizes[l + 1]),
                                                       static_cast<Eigen::Index>(sizes[l])));
        net.biases.emplace_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sizes[l + 1])));
    }
    return net;
}

std::size_t QNetwork::parameter_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        n += static_cast<std::size_t>(weights[l].size()) + static_cast<std::size_t>(biases[l].size());
    }
    return n;
}

bool QNetwork::all_finite() const {
    for (std::size_t l = 0; l < weights.size(); ++l) {
        if (!weights[l].allFinite() || !biases[l].allFinite()) return false;
    }
    return true;
}

QNetwork make_q_network(Rng& rng) { return QNetwork::make({5, 128, 64, 7}, rng); }

Eigen::MatrixXd forward(const QNetwork& net, const Eigen::MatrixXd& batch) {
    if (batch.cols() != static_cast<Eigen::Index>(net.input_size())) {
        throw std::invalid_argument("forward: input width does not match network input layer");
    }
    Eigen::MatrixXd h = batch;
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        Eigen::MatrixXd pre = (h * net.weights[l].transpose()).rowwise() + net.biases[l].transpose();
        if (l + 1 < net.weights.size()) {
            h = pre.cwiseMax(0.0);
        } else {
            h = std::move(pre);
        }
    }
    return h;
}

Eigen::VectorXd forward(const QNetwork& net, const Eigen::VectorXd& input) {
    return forward(net, Eigen::MatrixXd(input.transpose())).row(0).transpose();
}

double backprop(const QNetwork& net, const Eigen::MatrixXd& batch, const std::vector<int>& actions,
                const Eigen::VectorXd& targets, Gradients& out) {
    const auto n = batch.rows();
    if (n == 0) throw std::invalid_argument("backprop: empty batch");
    if (static_cast<Eigen::Index>(actions.size()) != n || targets.size() != n) {
        throw std::invalid_argument("backprop: batch, actions and targets disagree in length");
    }

    const std::size_t layers = net.weights.size();
    std::vector<Eigen::MatrixXd> activations;  // post-activation, activations[0] = input
    std::vector<Eigen::MatrixXd> pre;          // pre-activation per layer
    activations.reserve(layers + 1);
    pre.reserve(layers);
    activations.push_back(batch);
    for (std::size_t l = 0; l < layers; ++l) {
        pre.emplace_back((activations.back() * net.weights[l].transpose()).rowwise() +
                         net.biases[l].transpose());
        if (l + 1 < layers) {
            activations.emplace_back(pre.back().cwiseMax(0.0));
        } else {
            activations.push_back(pre.back());
        }
    }

    const Eigen::MatrixXd& q = activations.back();
    double loss = 0.0;
    Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(q.rows(), q.cols());
    const double inv_n = 1.0 / static_cast<double>(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const int a = actions[static_cast<std::size_t>(i)];
        if (a < 0 || a >= q.cols()) {
            throw std::invalid_argument("backprop: action index out of range");
        }
        const double err = q(i, a) - targets(i);
        loss += err * err * inv_n;
        delta(i, a) = 2.0 * err * inv_n;
    }

    out.weights.resize(layers);
    out.biases.resize(layers);
    for (std::size_t l = layers; l-- > 0;) {
        out.weights[l] = delta.transpose() * activations[l];
        out.biases[l] = delta.colwise().sum();
        if (l > 0) {
            Eigen::MatrixXd back = delta * net.weights[l];
            delta = back.cwiseProduct((pre[l - 1].array() > 0.0).cast<double>().matrix());
        }
    }
    return loss;
}

RmsPropState RmsPropState::make(const QNetwork& net, double learning_rate, double decay,
                                double epsilon) {
    RmsPropState s;
    s.learning_rate = learning_rate;
    s.decay = decay;
    s.epsilon = epsilon;
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        s.weight_acc.emplace_back(Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
        s.bias_acc.emplace_back(Eigen::VectorXd::Zero(net.biases[l].size()));
    }
    return s;
}

double train_step(QNetwork& net, RmsPropState& opt, const Eigen::MatrixXd& batch,
                  const std::vector<int>& actions, const Eigen::VectorXd& targets) {
    Gradients grads;
    const double loss = backprop(net, batch, actions, targets, grads);
    if (!std::isfinite(loss)) {
        throw std::runtime_error("train_step: non-finite loss");
    }
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        if (!grads.weights[l].allFinite() || !grads.biases[l].allFinite()) {
            throw std::runtime_error("train_step: non-finite gradient");
        }
        opt.weight_acc[l].array() = opt.decay * opt.weight_acc[l].array() +
                                    (1.0 - opt.decay) * grads.weights[l].array().square();
        opt.bias_acc[l].array() = opt.decay * opt.bias_acc[l].array() +
                                  (1.0 - opt.decay) * grads.biases[l].array().square();
        net.weights[l].array() -= opt.learning_rate * grads.weights[l].array() /
                                  (opt.weight_acc[l].array().sqrt() + opt.epsilon);
        net.biases[l].array() -= opt.learning_rate * grads.biases[l].array() /
                                 (opt.bias_acc[l].array().sqrt() + opt.epsilon);
    }
    return loss;
}

void sync_target(const QNetwork& main, QNetwork& target) {
    if (!main.same_architecture(target)) {
        throw std::invalid_argument("sync_target: architecture mismatch");
    }
    target.weights = main.weights;
    target.biases = main.biases;
}

namespace {

void write_bytes(std::ostream& out, const void* p, std::size_t n) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void write_u32(std::ostream& out, std::uint32_t v) { write_bytes(out, &v, sizeof v); }

void read_bytes(std::istream& in, void* p, std::size_t n, const char* what) {
    const auto offset = in.tellg();
    in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (!in) {
        std::ostringstream msg;
        msg << "load_network: truncated or unreadable stream while reading " << what
            << " at byte offset " << static_cast<long long>(offset);
        throw std::runtime_error(msg.str());
    }
}

std::uint32_t read_u32(std::istream& in, const char* what) {
    std::uint32_t v = 0;
    read_bytes(in, &v, sizeof v, what);
    return v;
}

constexpr char kNetworkMagic[4] = {'U', 'Q', 'N', 'W'};
constexpr std::uint32_t kMaxLayerWidth = 1u << 20;

}  // namespace

void save_network(const QNetwork& net, std::ostream& out) {
    write_bytes(out, kNetworkMagic, sizeof kNetworkMagic);
    write_u32(out, kNetworkFormatVersion);
    write_u32(out, static_cast<std::uint32_t>(net.layer_sizes.size()));
    for (std::size_t s : net.layer_sizes) write_u32(out, static_cast<std::uint32_t>(s));
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        const Eigen::MatrixXd& w = net.weights[l];
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                const double v = w(r, c);
                write_bytes(out, &v, sizeof v);
            }
        }
        const Eigen::VectorXd& b = net.biases[l];
        for (Eigen::Index r = 0; r < b.size(); ++r) {
            const double v = b(r);
            write_bytes(out, &v, sizeof v);
        }
    }
    if (!out) throw std::runtime_error("save_network: stream write failed");
}

void save_network(const QNetwork& net, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_network: cannot open " + path.string());
    save_network(net, out);
}

QNetwork load_network(std::istream& in) {
    char magic[4] = {};
    read_bytes(in, magic, sizeof magic, "magic");
    if (std::memcmp(magic, kNetworkMagic, sizeof magic) != 0) {
        throw std::runtime_error("load_network: bad magic, not a network blob");
    }
    const std::uint32_t version = read_u32(in, "format version");
    if (version != kNetworkFormatVersion) {
        throw std::runtime_error("load_network: unsupported format version " +
                                 std::to_string(version));
    }
    const std::uint32_t n_sizes = read_u32(in, "layer count");
    if (n_sizes < 2 || n_sizes > 64) {
        throw std::runtime_error("load_network: implausible layer count " +
                                 std::to_string(n_sizes));
    }
    std::vector<std::size_t> sizes(n_sizes);
    for (auto& s : sizes) {
        const std::uint32_t v = read_u32(in, "layer size");
        if (v == 0 || v > kMaxLayerWidth) {
            throw std::runtime_error("load_network: implausible layer size " + std::to_string(v));
        }
        s = v;
    }
    QNetwork net = QNetwork::zeros(sizes);
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        Eigen::MatrixXd& w = net.weights[l];
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                read_bytes(in, &w(r, c), sizeof(double), "weight matrix");
            }
        }
        Eigen::VectorXd& b = net.biases[l];
        for (Eigen::Index r = 0; r < b.size(); ++r) {
            read_bytes(in, &b(r), sizeof(double), "bias vector");
        }
    }
    return net;
}

QNetwork load_network(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_network: cannot open " + path.string());
    return load_network(in);
}

}  // namespace uavsim
