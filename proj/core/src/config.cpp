#include "uavsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

namespace uavsim {

std::size_t ExperimentConfig::effective_epsilon_decay_steps() const {
    if (agent.epsilon_decay_steps > 0) return agent.epsilon_decay_steps;
    return std::max<std::size_t>(1, episodes * world.max_steps / 2);
}

AgentConfig ExperimentConfig::resolved_agent_config() const {
    AgentConfig out = agent;
    out.epsilon_decay_steps = effective_epsilon_decay_steps();
    return out;
}

void ExperimentConfig::validate() const {
    world.validate();
    resolved_agent_config().validate();
    if (trials == 0) throw std::invalid_argument("run: trials must be at least 1");
    if (policy != "mad-ddqn" && policy != "random") {
        throw std::invalid_argument("run: policy must be 'mad-ddqn' or 'random', got '" + policy +
                                    "'");
    }
    if (checkpoint_every == 0) {
        throw std::invalid_argument("run: checkpoint_every must be positive");
    }
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string to_upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: '" + key + "' expects a number, got '" + value + "'");
    }
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        if (!value.empty() && value[0] == '-') throw std::invalid_argument("negative");
        const std::uint64_t v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: '" + key + "' expects a non-negative integer, got '" +
                                    value + "'");
    }
}

// One settable entry; the handler stores a validated value into the config.
using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

std::map<std::string, Setter> build_schema() {
    std::map<std::string, Setter> schema;
    auto num = [&schema](const std::string& key, std::function<void(ExperimentConfig&, double)> f) {
        schema[key] = [f](ExperimentConfig& c, const std::string& k, const std::string& v) {
            f(c, parse_double(k, v));
        };
    };
    auto uint = [&schema](const std::string& key,
                          std::function<void(ExperimentConfig&, std::uint64_t)> f) {
        schema[key] = [f](ExperimentConfig& c, const std::string& k, const std::string& v) {
            f(c, parse_uint(k, v));
        };
    };

    uint("world.num_uavs", [](auto& c, auto v) { c.world.n_uavs = v; });
    uint("world.static_users", [](auto& c, auto v) { c.world.n_static_users = v; });
    uint("world.mobile_users", [](auto& c, auto v) { c.world.n_mobile_users = v; });
    num("world.x_min", [](auto& c, auto v) { c.world.area.x_min = v; });
    num("world.x_max", [](auto& c, auto v) { c.world.area.x_max = v; });
    num("world.y_min", [](auto& c, auto v) { c.world.area.y_min = v; });
    num("world.y_max", [](auto& c, auto v) { c.world.area.y_max = v; });
    num("world.h_min", [](auto& c, auto v) { c.world.h_min = v; });
    num("world.h_max", [](auto& c, auto v) { c.world.h_max = v; });
    num("world.step_x", [](auto& c, auto v) { c.world.step_x = v; });
    num("world.step_y", [](auto& c, auto v) { c.world.step_y = v; });
    num("world.step_z", [](auto& c, auto v) { c.world.step_z = v; });
    num("world.neighbourhood_radius", [](auto& c, auto v) { c.world.neighbourhood_radius = v; });
    num("world.delta_t", [](auto& c, auto v) {
        c.world.delta_t = v;
        c.world.gmm.step_duration = v;  // users and UAVs share the step clock
    });
    uint("world.max_steps", [](auto& c, auto v) { c.world.max_steps = v; });
    num("world.energy_budget_j", [](auto& c, auto v) { c.world.energy_budget = v; });

    num("channel.attenuation", [](auto& c, auto v) { c.world.channel.attenuation = v; });
    num("channel.pathloss_exponent",
        [](auto& c, auto v) { c.world.channel.pathloss_exponent = v; });
    num("channel.tx_power_dbm", [](auto& c, auto v) { c.world.channel.tx_power_w = dbm_to_watts(v); });
    num("channel.noise_dbm", [](auto& c, auto v) { c.world.channel.noise_power_w = dbm_to_watts(v); });
    num("channel.bandwidth_hz", [](auto& c, auto v) { c.world.channel.bandwidth_hz = v; });
    num("channel.sinr_threshold_db",
        [](auto& c, auto v) { c.world.channel.sinr_threshold = db_to_linear(v); });

    num("power.blade_profile_const",
        [](auto& c, auto v) { c.world.power.blade_profile_const = v; });
    num("power.induced_const", [](auto& c, auto v) { c.world.power.induced_const = v; });
    num("power.tip_speed", [](auto& c, auto v) { c.world.power.tip_speed = v; });
    num("power.mean_hover_velocity",
        [](auto& c, auto v) { c.world.power.mean_hover_velocity = v; });
    num("power.drag_ratio", [](auto& c, auto v) { c.world.power.drag_ratio = v; });
    num("power.rotor_solidity", [](auto& c, auto v) { c.world.power.rotor_solidity = v; });
    num("power.rotor_disc_area", [](auto& c, auto v) { c.world.power.rotor_disc_area = v; });
    num("power.air_density", [](auto& c, auto v) { c.world.power.air_density = v; });

    num("gmm.memory", [](auto& c, auto v) { c.world.gmm.memory = v; });
    num("gmm.mean_speed", [](auto& c, auto v) { c.world.gmm.mean_speed = v; });
    num("gmm.speed_noise_std", [](auto& c, auto v) { c.world.gmm.speed_noise_std = v; });
    num("gmm.heading_noise_std", [](auto& c, auto v) { c.world.gmm.heading_noise_std = v; });
    num("gmm.max_speed", [](auto& c, auto v) { c.world.gmm.max_speed = v; });

    num("agent.discount", [](auto& c, auto v) { c.agent.discount = v; });
    num("agent.learning_rate", [](auto& c, auto v) { c.agent.learning_rate = v; });
    uint("agent.batch_size", [](auto& c, auto v) { c.agent.batch_size = v; });
    uint("agent.memory_capacity", [](auto& c, auto v) { c.agent.memory_capacity = v; });
    uint("agent.target_sync_period", [](auto& c, auto v) { c.agent.target_sync_period = v; });
    num("agent.epsilon_start", [](auto& c, auto v) { c.agent.epsilon_start = v; });
    num("agent.epsilon_end", [](auto& c, auto v) { c.agent.epsilon_end = v; });
    uint("agent.epsilon_decay_steps", [](auto& c, auto v) { c.agent.epsilon_decay_steps = v; });
    num("agent.rms_decay", [](auto& c, auto v) { c.agent.rms_decay = v; });
    num("agent.rms_epsilon", [](auto& c, auto v) { c.agent.rms_epsilon = v; });

    uint("run.episodes", [](auto& c, auto v) { c.episodes = v; });
    uint("run.trials", [](auto& c, auto v) { c.trials = v; });
    uint("run.seed", [](auto& c, auto v) { c.seed = v; });
    uint("run.checkpoint_every", [](auto& c, auto v) { c.checkpoint_every = v; });
    uint("run.training_layouts", [](auto& c, auto v) { c.training_layouts = v; });
    schema["run.policy"] = [](ExperimentConfig& c, const std::string&, const std::string& v) {
        c.policy = v;
    };
    schema["run.out_dir"] = [](ExperimentConfig& c, const std::string&, const std::string& v) {
        c.out_dir = v;
    };
    return schema;
}

const std::map<std::string, Setter>& schema() {
    static const std::map<std::string, Setter> s = build_schema();
    return s;
}

void apply(ExperimentConfig& cfg, const std::string& dotted_key, const std::string& value) {
    const auto it = schema().find(dotted_key);
    if (it == schema().end()) {
        throw std::invalid_argument("config: unknown key '" + dotted_key + "'");
    }
    it->second(cfg, dotted_key, value);
}

void apply_env_overrides(ExperimentConfig& cfg) {
    for (const auto& [key, setter] : schema()) {
        std::string env_name = "UAVSIM_" + to_upper(key);
        std::replace(env_name.begin(), env_name.end(), '.', '_');
        if (const char* v = std::getenv(env_name.c_str())) {
            setter(cfg, key, trim(v));
        }
    }
}

}  // namespace

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("config: cannot open " + path.string());
    }
    ExperimentConfig cfg;
    std::string section;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw std::invalid_argument("config: malformed section at " + path.string() + ":" +
                                            std::to_string(lineno));
            }
            section = to_lower(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: expected 'key = value' at " + path.string() +
                                        ":" + std::to_string(lineno));
        }
        const std::string key = to_lower(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) {
            throw std::invalid_argument("config: key '" + key + "' outside any section at " +
                                        path.string() + ":" + std::to_string(lineno));
        }
        apply(cfg, section + "." + key, value);
    }
    apply_env_overrides(cfg);
    return cfg;
}

ExperimentConfig default_experiment_config() {
    ExperimentConfig cfg;
    apply_env_overrides(cfg);
    return cfg;
}

}  // namespace uavsim
