#include "uavsim/agent.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace uavsim {

ReplayMemory::ReplayMemory(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) throw std::invalid_argument("ReplayMemory: zero capacity");
    buf_.reserve(capacity_);
}

void ReplayMemory::push(const Transition& t) {
    if (size_ < capacity_) {
        buf_.push_back(t);
        ++size_;
    } else {
        buf_[next_] = t;  // overwrite the oldest slot
    }
    next_ = (next_ + 1) % capacity_;
}

const Transition& ReplayMemory::at(std::size_t i) const {
    if (i >= size_) throw std::out_of_range("ReplayMemory: index out of range");
    if (size_ < capacity_) return buf_[i];
    return buf_[(next_ + i) % capacity_];
}

std::vector<Transition> ReplayMemory::sample(std::size_t batch, Rng& rng) const {
    if (size_ == 0) throw std::logic_error("ReplayMemory: sampling from an empty memory");
    std::uniform_int_distribution<std::size_t> pick(0, size_ - 1);
    std::vector<Transition> out;
    out.reserve(batch);
    for (std::size_t i = 0; i < batch; ++i) {
        out.push_back(buf_[pick(rng)]);
    }
    return out;
}

void AgentConfig::validate() const {
    if (discount < 0.0 || discount >= 1.0) {
        throw std::invalid_argument("AgentConfig: discount must lie in [0, 1)");
    }
    if (!(learning_rate > 0.0)) {
        throw std::invalid_argument("AgentConfig: learning rate must be positive");
    }
    if (batch_size == 0 || batch_size > memory_capacity) {
        throw std::invalid_argument("AgentConfig: batch size must be in [1, memory capacity]");
    }
    if (target_sync_period == 0) {
        throw std::invalid_argument("AgentConfig: target sync period must be positive");
    }
    if (epsilon_start < 0.0 || epsilon_start > 1.0 || epsilon_end < 0.0 || epsilon_end > 1.0) {
        throw std::invalid_argument("AgentConfig: epsilon endpoints must lie in [0, 1]");
    }
    if (epsilon_decay_steps == 0) {
        throw std::invalid_argument("AgentConfig: epsilon decay horizon must be positive");
    }
}

double epsilon_at(std::size_t step, const AgentConfig& cfg) {
    if (step >= cfg.epsilon_decay_steps) return cfg.epsilon_end;
    const double frac = static_cast<double>(step) / static_cast<double>(cfg.epsilon_decay_steps);
    return cfg.epsilon_start + (cfg.epsilon_end - cfg.epsilon_start) * frac;
}

int select_action(const QNetwork& net, const Observation& obs, double epsilon, Rng& rng) {
    if (epsilon < 0.0 || epsilon > 1.0) {
        throw std::invalid_argument("select_action: epsilon must lie in [0, 1]");
    }
    if (epsilon > 0.0 && std::uniform_real_distribution<double>(0.0, 1.0)(rng) < epsilon) {
        return std::uniform_int_distribution<int>(0, kNumActions - 1)(rng);
    }
    const Eigen::VectorXd input =
        Eigen::Map<const Eigen::VectorXd>(obs.data(), static_cast<Eigen::Index>(obs.size()));
    const Eigen::VectorXd q = forward(net, input);
    int best = 0;
    for (int a = 1; a < static_cast<int>(q.size()); ++a) {
        if (q(a) > q(best)) best = a;
    }
    return best;
}

Eigen::VectorXd ddqn_targets(const QNetwork& main, const QNetwork& target,
                             const std::vector<Transition>& batch, double discount) {
    const auto n = static_cast<Eigen::Index>(batch.size());
    Eigen::MatrixXd next_states(n, kObservationSize);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < kObservationSize; ++c) {
            next_states(i, static_cast<Eigen::Index>(c)) = batch[static_cast<std::size_t>(i)].next_state[c];
        }
    }
    const Eigen::MatrixXd q_main = forward(main, next_states);
    const Eigen::MatrixXd q_target = forward(target, next_states);

    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Transition& t = batch[static_cast<std::size_t>(i)];
        if (t.terminal) {
            y(i) = t.reward;
            continue;
        }
        Eigen::Index best = 0;
        for (Eigen::Index a = 1; a < q_main.cols(); ++a) {
            if (q_main(i, a) > q_main(i, best)) best = a;
        }
        y(i) = t.reward + discount * q_target(i, best);
    }
    return y;
}

Agent::Agent(const AgentConfig& cfg, std::uint64_t seed)
    : cfg_(cfg), memory_(cfg.memory_capacity), rng_(seed) {
    cfg_.validate();
    net_ = make_q_network(rng_);
    target_ = net_;
    opt_ = RmsPropState::make(net_, cfg_.learning_rate, cfg_.rms_decay, cfg_.rms_epsilon);
}

int Agent::act(const Observation& obs) {
    const double eps = epsilon_at(env_steps_, cfg_);
    ++env_steps_;
    return select_action(net_, obs, eps, rng_);
}

int Agent::act_greedy(const Observation& obs) const {
    // Epsilon 0 draws nothing from the RNG; the throwaway stream keeps this const.
    Rng unused(0);
    return select_action(net_, obs, 0.0, unused);
}

void Agent::remember(const Transition& t) {
    if (t.action < 0 || t.action >= kNumActions) {
        throw std::invalid_argument("Agent::remember: action index out of range");
    }
    memory_.push(t);
}

std::optional<double> Agent::update() {
    if (memory_.size() < cfg_.batch_size) return std::nullopt;

    const std::vector<Transition> batch = memory_.sample(cfg_.batch_size, rng_);
    const Eigen::VectorXd targets = ddqn_targets(net_, target_, batch, cfg_.discount);

    const auto n = static_cast<Eigen::Index>(batch.size());
    Eigen::MatrixXd states(n, kObservationSize);
    std::vector<int> actions(batch.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        const Transition& t = batch[static_cast<std::size_t>(i)];
        for (std::size_t c = 0; c < kObservationSize; ++c) {
            states(i, static_cast<Eigen::Index>(c)) = t.state[c];
        }
        actions[static_cast<std::size_t>(i)] = t.action;
    }

    const double loss = train_step(net_, opt_, states, actions, targets);
    ++updates_;
    if (updates_ % cfg_.target_sync_period == 0) {
        sync_target(net_, target_);
    }
    return loss;
}

namespace {

constexpr char kCheckpointMagic[4] = {'U', 'Q', 'C', 'K'};

void write_bytes(std::ostream& out, const void* p, std::size_t n) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

template <typename T>
void write_pod(std::ostream& out, T v) {
    write_bytes(out, &v, sizeof v);
}

void read_bytes(std::istream& in, void* p, std::size_t n, const char* what) {
    const auto offset = in.tellg();
    in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (!in) {
        std::ostringstream msg;
        msg << "load_checkpoint: truncated or unreadable file while reading " << what
            << " at byte offset " << static_cast<long long>(offset);
        throw std::runtime_error(msg.str());
    }
}

template <typename T>
T read_pod(std::istream& in, const char* what) {
    T v{};
    read_bytes(in, &v, sizeof v, what);
    return v;
}

struct CheckpointHeader {
    AgentConfig cfg;
    std::uint64_t env_steps = 0;
};

CheckpointHeader read_checkpoint_header(std::istream& in) {
    char magic[4] = {};
    read_bytes(in, magic, sizeof magic, "magic");
    if (std::memcmp(magic, kCheckpointMagic, sizeof magic) != 0) {
        throw std::runtime_error("load_checkpoint: bad magic, not an agent checkpoint");
    }
    const auto version = read_pod<std::uint32_t>(in, "format version");
    if (version != Agent::kCheckpointFormatVersion) {
        throw std::runtime_error("load_checkpoint: unsupported format version " +
                                 std::to_string(version));
    }
    CheckpointHeader h;
    h.cfg.discount = read_pod<double>(in, "discount");
    h.cfg.learning_rate = read_pod<double>(in, "learning rate");
    h.cfg.batch_size = read_pod<std::uint64_t>(in, "batch size");
    h.cfg.memory_capacity = read_pod<std::uint64_t>(in, "memory capacity");
    h.cfg.target_sync_period = read_pod<std::uint64_t>(in, "target sync period");
    h.cfg.epsilon_start = read_pod<double>(in, "epsilon start");
    h.cfg.epsilon_end = read_pod<double>(in, "epsilon end");
    h.cfg.epsilon_decay_steps = read_pod<std::uint64_t>(in, "epsilon decay steps");
    h.cfg.rms_decay = read_pod<double>(in, "rms decay");
    h.cfg.rms_epsilon = read_pod<double>(in, "rms epsilon");
    h.env_steps = read_pod<std::uint64_t>(in, "env step counter");
    return h;
}

}  // namespace

void Agent::save_checkpoint(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path.string());
    write_bytes(out, kCheckpointMagic, sizeof kCheckpointMagic);
    write_pod<std::uint32_t>(out, kCheckpointFormatVersion);
    write_pod<double>(out, cfg_.discount);
    write_pod<double>(out, cfg_.learning_rate);
    write_pod<std::uint64_t>(out, cfg_.batch_size);
    write_pod<std::uint64_t>(out, cfg_.memory_capacity);
    write_pod<std::uint64_t>(out, cfg_.target_sync_period);
    write_pod<double>(out, cfg_.epsilon_start);
    write_pod<double>(out, cfg_.epsilon_end);
    write_pod<std::uint64_t>(out, cfg_.epsilon_decay_steps);
    write_pod<double>(out, cfg_.rms_decay);
    write_pod<double>(out, cfg_.rms_epsilon);
    write_pod<std::uint64_t>(out, env_steps_);
    save_network(net_, out);
    if (!out) throw std::runtime_error("save_checkpoint: write failed for " + path.string());
}

Agent Agent::load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path.string());
    const CheckpointHeader h = read_checkpoint_header(in);

    Agent agent;
    agent.cfg_ = h.cfg;
    agent.cfg_.validate();
    agent.net_ = load_network(in);
    if (agent.net_.input_size() != kObservationSize ||
        agent.net_.output_size() != static_cast<std::size_t>(kNumActions)) {
        throw std::runtime_error("load_checkpoint: architecture mismatch, controller expects " +
                                 std::to_string(kObservationSize) + " inputs and " +
                                 std::to_string(kNumActions) + " outputs");
    }
    agent.target_ = agent.net_;
    agent.opt_ = RmsPropState::make(agent.net_, h.cfg.learning_rate, h.cfg.rms_decay,
                                    h.cfg.rms_epsilon);
    agent.memory_ = ReplayMemory(h.cfg.memory_capacity);
    agent.rng_ = Rng(h.env_steps);  // resumed runs reseed explicitly via the harness
    agent.env_steps_ = h.env_steps;
    return agent;
}

QNetwork Agent::load_checkpoint_network(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path.string());
    read_checkpoint_header(in);
    QNetwork net = load_network(in);
    if (net.input_size() != kObservationSize ||
        net.output_size() != static_cast<std::size_t>(kNumActions)) {
        throw std::runtime_error("load_checkpoint: architecture mismatch, controller expects " +
                                 std::to_string(kObservationSize) + " inputs and " +
                                 std::to_string(kNumActions) + " outputs");
    }
    return net;
}

}  // namespace uavsim
