#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "uavsim/config.hpp"

using namespace uavsim;

namespace {

std::filesystem::path write_temp_config(const std::string& body, const std::string& name) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << body;
    return path;
}

}  // namespace

TEST_CASE("defaults describe the full-scale experiment") {
    const ExperimentConfig cfg;
    CHECK(cfg.episodes == 250);
    CHECK(cfg.trials == 2000);
    CHECK(cfg.world.max_steps == 1500);
    CHECK(cfg.world.n_static_users == 200);
    CHECK(cfg.world.n_mobile_users == 200);
    CHECK(cfg.world.area.x_max == 1000.0);
    CHECK(cfg.world.channel.bandwidth_hz == 1e6);
    CHECK(cfg.world.channel.pathloss_exponent == 2.0);
    CHECK(cfg.world.channel.tx_power_w == doctest::Approx(0.1));           // 20 dBm
    CHECK(cfg.world.channel.noise_power_w == doctest::Approx(1e-16));      // -130 dBm
    CHECK(cfg.world.channel.sinr_threshold == doctest::Approx(3.16227766016838));  // 5 dB
    CHECK(cfg.agent.discount == 0.95);
    CHECK(cfg.agent.learning_rate == 1e-4);
    CHECK(cfg.agent.batch_size == 1024);
    CHECK(cfg.agent.memory_capacity == 10000);
    CHECK(cfg.agent.target_sync_period == 100);
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config files override defaults section by section") {
    const auto path = write_temp_config(
        "# comment line\n"
        "[world]\n"
        "num_uavs = 3\n"
        "static_users = 20\n"
        "mobile_users = 20\n"
        "x_max = 500 ; trailing comment\n"
        "y_max = 500\n"
        "max_steps = 400\n"
        "delta_t = 2\n"
        "\n"
        "[channel]\n"
        "sinr_threshold_db = 3\n"
        "tx_power_dbm = 23\n"
        "\n"
        "[agent]\n"
        "batch_size = 64\n"
        "memory_capacity = 512\n"
        "\n"
        "[run]\n"
        "episodes = 60\n"
        "trials = 200\n"
        "seed = 9\n"
        "policy = random\n",
        "uavsim_cfg_basic.ini");

    const ExperimentConfig cfg = load_experiment_config(path);
    CHECK(cfg.world.n_uavs == 3);
    CHECK(cfg.world.n_static_users == 20);
    CHECK(cfg.world.area.x_max == 500.0);
    CHECK(cfg.world.max_steps == 400);
    CHECK(cfg.world.delta_t == 2.0);
    CHECK(cfg.world.gmm.step_duration == 2.0);  // shares the step clock
    CHECK(cfg.world.channel.sinr_threshold == doctest::Approx(std::pow(10.0, 0.3)));
    CHECK(cfg.world.channel.tx_power_w == doctest::Approx(0.2).epsilon(1e-3));
    CHECK(cfg.agent.batch_size == 64);
    CHECK(cfg.episodes == 60);
    CHECK(cfg.trials == 200);
    CHECK(cfg.seed == 9);
    CHECK(cfg.policy == "random");
    CHECK_NOTHROW(cfg.validate());
    std::filesystem::remove(path);
}

TEST_CASE("unknown keys and malformed lines are rejected") {
    auto path = write_temp_config("[world]\nnum_uav = 3\n", "uavsim_cfg_badkey.ini");
    CHECK_THROWS_WITH_AS(load_experiment_config(path), doctest::Contains("unknown key"),
                         std::invalid_argument);
    std::filesystem::remove(path);

    path = write_temp_config("[world]\nnum_uavs 3\n", "uavsim_cfg_noeq.ini");
    CHECK_THROWS_AS(load_experiment_config(path), std::invalid_argument);
    std::filesystem::remove(path);

    path = write_temp_config("num_uavs = 3\n", "uavsim_cfg_nosection.ini");
    CHECK_THROWS_WITH_AS(load_experiment_config(path), doctest::Contains("outside any section"),
                         std::invalid_argument);
    std::filesystem::remove(path);

    path = write_temp_config("[world]\nnum_uavs = many\n", "uavsim_cfg_badvalue.ini");
    CHECK_THROWS_AS(load_experiment_config(path), std::invalid_argument);
    std::filesystem::remove(path);

    CHECK_THROWS_AS(load_experiment_config("/nonexistent/uavsim.ini"), std::runtime_error);
}

TEST_CASE("environment variables override file values") {
    const auto path = write_temp_config("[world]\nnum_uavs = 4\n", "uavsim_cfg_env.ini");
    setenv("UAVSIM_WORLD_NUM_UAVS", "7", 1);
    setenv("UAVSIM_RUN_SEED", "321", 1);
    const ExperimentConfig cfg = load_experiment_config(path);
    unsetenv("UAVSIM_WORLD_NUM_UAVS");
    unsetenv("UAVSIM_RUN_SEED");
    CHECK(cfg.world.n_uavs == 7);
    CHECK(cfg.seed == 321);
    std::filesystem::remove(path);
}

TEST_CASE("epsilon horizon defaults to half the planned steps") {
    ExperimentConfig cfg;
    cfg.episodes = 60;
    cfg.world.max_steps = 400;
    cfg.agent.epsilon_decay_steps = 0;
    CHECK(cfg.effective_epsilon_decay_steps() == 12000);
    CHECK(cfg.resolved_agent_config().epsilon_decay_steps == 12000);

    cfg.agent.epsilon_decay_steps = 5000;
    CHECK(cfg.effective_epsilon_decay_steps() == 5000);
}

TEST_CASE("experiment validation catches bad run settings") {
    ExperimentConfig cfg;
    cfg.policy = "greedy";
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("policy"), std::invalid_argument);

    cfg = ExperimentConfig{};
    cfg.trials = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = ExperimentConfig{};
    cfg.agent.batch_size = 20000;  // larger than the replay memory
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
