#include <benchmark/benchmark.h>

#include <vector>

#include "uavsim/agent.hpp"
#include "uavsim/neural.hpp"

namespace {

uavsim::QNetwork controller_net(std::uint64_t seed) {
    uavsim::Rng rng(seed);
    return uavsim::make_q_network(rng);
}

void BM_ForwardSingle(benchmark::State& state) {
    const uavsim::QNetwork net = controller_net(1);
    Eigen::VectorXd obs(5);
    obs << 0.2, 0.4, 0.6, 0.1, 0.9;
    for (auto _ : state) {
        benchmark::DoNotOptimize(uavsim::forward(net, obs));
    }
}

void BM_ForwardBatch(benchmark::State& state) {
    const uavsim::QNetwork net = controller_net(1);
    const auto batch = static_cast<Eigen::Index>(state.range(0));
    Eigen::MatrixXd x = Eigen::MatrixXd::Random(batch, 5).cwiseAbs();
    for (auto _ : state) {
        benchmark::DoNotOptimize(uavsim::forward(net, x));
    }
    state.SetItemsProcessed(state.iterations() * batch);
}

// The training hot path: double-Q target construction plus one RMSprop step
// at the production batch size.
void BM_UpdateStep(benchmark::State& state) {
    uavsim::QNetwork net = controller_net(1);
    uavsim::QNetwork target = controller_net(2);
    uavsim::RmsPropState opt = uavsim::RmsPropState::make(net);
    uavsim::Rng rng(3);

    const std::size_t batch_size = 1024;
    std::vector<uavsim::Transition> batch(batch_size);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> act(0, uavsim::kNumActions - 1);
    for (auto& t : batch) {
        for (auto& v : t.state) v = u(rng);
        for (auto& v : t.next_state) v = u(rng);
        t.action = act(rng);
        t.reward = u(rng) * 2.0 - 1.0;
    }
    Eigen::MatrixXd states(batch_size, 5);
    std::vector<int> actions(batch_size);
    for (std::size_t i = 0; i < batch_size; ++i) {
        for (std::size_t c = 0; c < 5; ++c) states(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = batch[i].state[c];
        actions[i] = batch[i].action;
    }

    for (auto _ : state) {
        const Eigen::VectorXd targets = uavsim::ddqn_targets(net, target, batch, 0.95);
        benchmark::DoNotOptimize(uavsim::train_step(net, opt, states, actions, targets));
    }
}

}  // namespace

BENCHMARK(BM_ForwardSingle);
BENCHMARK(BM_ForwardBatch)->Arg(64)->Arg(1024);
BENCHMARK(BM_UpdateStep)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
