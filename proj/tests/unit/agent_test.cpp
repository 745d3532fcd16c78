#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <filesystem>
#include <map>
#include <random>
#include <vector>

#include "uavsim/agent.hpp"

using namespace uavsim;

namespace {

AgentConfig small_config() {
    AgentConfig cfg;
    cfg.batch_size = 8;
    cfg.memory_capacity = 64;
    cfg.target_sync_period = 3;
    cfg.epsilon_decay_steps = 100;
    return cfg;
}

Transition make_transition(double tag, int action = 0, bool terminal = false) {
    Transition t;
    t.state = {tag, 0.1, 0.2, 0.3, 0.4};
    t.action = action;
    t.reward = tag;
    t.next_state = {0.4, 0.3, 0.2, 0.1, tag};
    t.terminal = terminal;
    return t;
}

}  // namespace

TEST_CASE("epsilon schedule endpoints and midpoint") {
    AgentConfig cfg;
    cfg.epsilon_decay_steps = 1000;
    CHECK(epsilon_at(0, cfg) == 1.0);
    CHECK(epsilon_at(1000, cfg) == 0.01);
    CHECK(epsilon_at(5000, cfg) == 0.01);
    CHECK(epsilon_at(500, cfg) == doctest::Approx(0.505));
}

TEST_CASE("epsilon 0 always exploits, ties break to action 0") {
    const QNetwork net = QNetwork::zeros({5, 7});  // all Q-values equal
    Rng rng(1);
    const Observation obs{0.5, 0.5, 0.5, 0.5, 0.5};
    for (int i = 0; i < 20; ++i) {
        CHECK(select_action(net, obs, 0.0, rng) == 0);
    }
}

TEST_CASE("epsilon 0 picks the argmax") {
    QNetwork net = QNetwork::zeros({5, 7});
    net.biases[0](4) = 2.0;  // constant network: action 4 dominates
    Rng rng(1);
    CHECK(select_action(net, {0.1, 0.2, 0.3, 0.4, 0.5}, 0.0, rng) == 4);
}

TEST_CASE("epsilon 1 is uniform over the seven actions") {
    const QNetwork net = QNetwork::zeros({5, 7});
    Rng rng(20240101);
    const Observation obs{0.0, 0.0, 0.0, 0.0, 0.0};
    std::array<int, kNumActions> counts{};
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        const int a = select_action(net, obs, 1.0, rng);
        REQUIRE(a >= 0);
        REQUIRE(a < kNumActions);
        ++counts[static_cast<std::size_t>(a)];
    }
    const double expected = static_cast<double>(draws) / kNumActions;
    double chi2 = 0.0;
    for (int c : counts) {
        const double d = c - expected;
        chi2 += d * d / expected;
    }
    CHECK(chi2 < 22.46);  // chi-square 0.999 quantile, 6 degrees of freedom
}

TEST_CASE("out-of-range epsilon is rejected") {
    const QNetwork net = QNetwork::zeros({5, 7});
    Rng rng(1);
    CHECK_THROWS_AS(select_action(net, {0, 0, 0, 0, 0}, 1.5, rng), std::invalid_argument);
}

TEST_CASE("replay memory evicts oldest first at capacity") {
    ReplayMemory memory(10000);
    for (int i = 0; i < 10001; ++i) {
        memory.push(make_transition(static_cast<double>(i)));
    }
    CHECK(memory.size() == 10000);
    CHECK(memory.at(0).reward == 1.0);          // transition 0 evicted
    CHECK(memory.at(9999).reward == 10000.0);   // newest kept
}

TEST_CASE("sampling returns only stored transitions") {
    ReplayMemory memory(16);
    for (int i = 0; i < 5; ++i) memory.push(make_transition(static_cast<double>(i)));
    Rng rng(3);
    for (int round = 0; round < 100; ++round) {
        const auto batch = memory.sample(1, rng);
        REQUIRE(batch.size() == 1);
        CHECK(batch[0].reward >= 0.0);
        CHECK(batch[0].reward <= 4.0);
    }
}

TEST_CASE("sampling is uniform over the stored set") {
    const std::size_t stored = 50;
    ReplayMemory memory(64);
    for (std::size_t i = 0; i < stored; ++i) memory.push(make_transition(static_cast<double>(i)));

    Rng rng(424242);
    std::map<double, int> counts;
    const int draws = 50000;
    for (int i = 0; i < draws; ++i) {
        counts[memory.sample(1, rng)[0].reward] += 1;
    }
    const double expected = static_cast<double>(draws) / stored;
    double chi2 = 0.0;
    for (const auto& [tag, count] : counts) {
        const double d = count - expected;
        chi2 += d * d / expected;
    }
    CHECK(counts.size() == stored);
    CHECK(chi2 < 85.35);  // chi-square 0.999 quantile, 49 degrees of freedom
}

TEST_CASE("terminal transitions use the bare reward as target") {
    Rng rng(9);
    const QNetwork main = make_q_network(rng);
    const QNetwork target = make_q_network(rng);
    std::vector<Transition> batch = {make_transition(0.7, 2, true)};
    const Eigen::VectorXd y = ddqn_targets(main, target, batch, 0.95);
    CHECK(y(0) == 0.7);
}

TEST_CASE("zero discount reduces every target to its reward") {
    Rng rng(10);
    const QNetwork main = make_q_network(rng);
    const QNetwork target = make_q_network(rng);
    std::vector<Transition> batch;
    for (int i = 0; i < 5; ++i) batch.push_back(make_transition(0.1 * i, i % kNumActions));
    const Eigen::VectorXd y = ddqn_targets(main, target, batch, 0.0);
    for (int i = 0; i < 5; ++i) CHECK(y(i) == batch[static_cast<std::size_t>(i)].reward);
}

TEST_CASE("hand-worked double-Q targets on fixed linear networks") {
    // Single-layer 5->7 nets are hand-evaluable: Q(s) = W s + b.
    QNetwork main = QNetwork::zeros({5, 7});
    QNetwork target = QNetwork::zeros({5, 7});
    // Column 0 drives transitions with s' = e0, column 1 those with s' = e1.
    const std::array<double, 7> main_col0 = {0.1, 0.5, 0.3, -0.2, 0.5, 0.0, 0.49};
    const std::array<double, 7> main_col1 = {-1.0, -2.0, -3.0, -4.0, -5.0, -6.0, 0.0};
    const std::array<double, 7> target_col0 = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0};
    const std::array<double, 7> target_col1 = {9.0, 8.0, 7.0, 6.0, 5.0, 4.0, 10.0};
    for (int r = 0; r < 7; ++r) {
        main.weights[0](r, 0) = main_col0[static_cast<std::size_t>(r)];
        main.weights[0](r, 1) = main_col1[static_cast<std::size_t>(r)];
        target.weights[0](r, 0) = target_col0[static_cast<std::size_t>(r)];
        target.weights[0](r, 1) = target_col1[static_cast<std::size_t>(r)];
    }

    Transition t0;  // argmax of main col0 is the 0.5 tie at indices 1 and 4 -> picks 1
    t0.next_state = {1.0, 0.0, 0.0, 0.0, 0.0};
    t0.reward = 0.5;
    Transition t1;  // terminal: target is the bare reward
    t1.next_state = {1.0, 0.0, 0.0, 0.0, 0.0};
    t1.reward = -1.5;
    t1.terminal = true;
    Transition t2;  // argmax of main col1 is index 6 (value 0); target values it at 10
    t2.next_state = {0.0, 1.0, 0.0, 0.0, 0.0};
    t2.reward = 1.0;

    const Eigen::VectorXd y = ddqn_targets(main, target, {t0, t1, t2}, 0.95);
    CHECK(y(0) == doctest::Approx(0.5 + 0.95 * 2.0).epsilon(1e-15));
    CHECK(y(1) == -1.5);
    CHECK(y(2) == doctest::Approx(1.0 + 0.95 * 10.0).epsilon(1e-15));
}

TEST_CASE("swapping main and target changes targets unless they are synced") {
    Rng rng(11);
    QNetwork main = make_q_network(rng);
    QNetwork target = make_q_network(rng);
    std::vector<Transition> batch;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 16; ++i) {
        Transition t = make_transition(u(rng), i % kNumActions);
        for (auto& v : t.next_state) v = u(rng);
        batch.push_back(t);
    }

    const Eigen::VectorXd forward_order = ddqn_targets(main, target, batch, 0.95);
    const Eigen::VectorXd swapped = ddqn_targets(target, main, batch, 0.95);
    CHECK((forward_order - swapped).cwiseAbs().maxCoeff() > 0.0);

    // After a sync the double-Q target collapses to the plain max target.
    sync_target(main, target);
    const Eigen::VectorXd synced = ddqn_targets(main, target, batch, 0.95);
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const Eigen::VectorXd next = Eigen::Map<const Eigen::VectorXd>(
            batch[i].next_state.data(), static_cast<Eigen::Index>(kObservationSize));
        const double plain = batch[i].reward + 0.95 * forward(target, next).maxCoeff();
        CHECK(synced(static_cast<Eigen::Index>(i)) == doctest::Approx(plain).epsilon(1e-15));
    }
}

TEST_CASE("no learning happens before the memory holds a full batch") {
    Agent agent(small_config(), 123);
    const QNetwork initial = agent.network();

    for (int i = 0; i < 7; ++i) {
        agent.remember(make_transition(0.1 * i, i % kNumActions));
        CHECK_FALSE(agent.update().has_value());
    }
    for (std::size_t l = 0; l < initial.weights.size(); ++l) {
        CHECK((agent.network().weights[l] - initial.weights[l]).cwiseAbs().maxCoeff() == 0.0);
    }

    agent.remember(make_transition(0.9, 1));
    CHECK(agent.update().has_value());
    double moved = 0.0;
    for (std::size_t l = 0; l < initial.weights.size(); ++l) {
        moved += (agent.network().weights[l] - initial.weights[l]).cwiseAbs().sum();
    }
    CHECK(moved > 0.0);
}

TEST_CASE("target parameters change only at sync events") {
    AgentConfig cfg = small_config();  // sync every 3 updates
    Agent agent(cfg, 77);
    const QNetwork at_start = agent.target_network();

    for (int i = 0; i < 16; ++i) agent.remember(make_transition(0.05 * i, i % kNumActions));

    REQUIRE(agent.update().has_value());  // update 1
    REQUIRE(agent.update().has_value());  // update 2
    for (std::size_t l = 0; l < at_start.weights.size(); ++l) {
        CHECK((agent.target_network().weights[l] - at_start.weights[l]).cwiseAbs().maxCoeff() ==
              0.0);
    }

    REQUIRE(agent.update().has_value());  // update 3 syncs
    for (std::size_t l = 0; l < at_start.weights.size(); ++l) {
        CHECK((agent.target_network().weights[l] - agent.network().weights[l])
                  .cwiseAbs()
                  .maxCoeff() == 0.0);
    }
}

TEST_CASE("agent act advances the exploration schedule") {
    AgentConfig cfg = small_config();
    cfg.epsilon_decay_steps = 10;
    Agent agent(cfg, 5);
    CHECK(agent.current_epsilon() == 1.0);
    const Observation obs{0.2, 0.2, 0.2, 0.2, 0.2};
    for (int i = 0; i < 10; ++i) agent.act(obs);
    CHECK(agent.current_epsilon() == 0.01);
    CHECK(agent.env_steps() == 10);
}

TEST_CASE("invalid transitions are rejected") {
    Agent agent(small_config(), 8);
    Transition bad = make_transition(0.5, 7);
    CHECK_THROWS_AS(agent.remember(bad), std::invalid_argument);
}

TEST_CASE("checkpoints preserve the policy and the config echo") {
    AgentConfig cfg = small_config();
    Agent agent(cfg, 2024);
    for (int i = 0; i < 12; ++i) {
        agent.remember(make_transition(0.1 * i, i % kNumActions));
        agent.act({0.5, 0.5, 0.5, 0.5, 0.5});
        agent.update();
    }

    const auto path = std::filesystem::temp_directory_path() / "uavsim_agent_roundtrip.ckpt";
    agent.save_checkpoint(path);
    const Agent loaded = Agent::load_checkpoint(path);

    CHECK(loaded.env_steps() == agent.env_steps());
    CHECK(loaded.config().batch_size == cfg.batch_size);
    CHECK(loaded.config().target_sync_period == cfg.target_sync_period);
    CHECK(loaded.config().epsilon_decay_steps == cfg.epsilon_decay_steps);

    Rng rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        Observation obs;
        for (auto& v : obs) v = u(rng);
        CHECK(agent.act_greedy(obs) == loaded.act_greedy(obs));
        const Eigen::VectorXd in = Eigen::Map<const Eigen::VectorXd>(
            obs.data(), static_cast<Eigen::Index>(obs.size()));
        CHECK((forward(agent.network(), in) - forward(loaded.network(), in))
                  .cwiseAbs()
                  .maxCoeff() == 0.0);
    }
    std::filesystem::remove(path);
}
