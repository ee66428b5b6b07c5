#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>
#include <vector>

#include "mbrd/env_factory.hpp"
#include "mbrd/net.hpp"
#include "mbrd/ppo.hpp"
#include "mbrd/reward_design.hpp"
#include "mbrd/rng.hpp"
#include "mbrd/rollout.hpp"

using namespace mbrd;

namespace {

std::vector<double> random_obs(int dim, Rng& rng) {
  std::vector<double> obs(dim);
  for (double& x : obs) x = uniform01(rng);
  return obs;
}

RolloutBuffer collect_batch(const std::string& domain, int steps,
                            const NetSpec& pspec, const ParamVector& policy) {
  auto env = make_env(domain);
  return collect_rollout(*env, pspec, policy, steps, 42);
}

void bench_policy_forward(benchmark::State& state) {
  const NetSpec spec{75, {8, 8}, 4};
  const ParamVector params = init_params(spec, 1);
  Rng rng = make_rng(2);
  const std::vector<double> obs = random_obs(spec.input_dim, rng);
  NetWorkspace ws;
  for (auto _ : state) {
    net_forward(spec, params, obs.data(), ws);
    benchmark::DoNotOptimize(ws.acts.back()[0]);
  }
}
BENCHMARK(bench_policy_forward);

void bench_value_forward_backward(benchmark::State& state) {
  const NetSpec spec{78, {32, 32}, 1};
  const ParamVector params = init_params(spec, 1);
  Rng rng = make_rng(2);
  const std::vector<double> obs = random_obs(spec.input_dim, rng);
  NetWorkspace ws;
  std::vector<double> grad(params.size());
  const double dout = 1.0;
  for (auto _ : state) {
    net_forward(spec, params, obs.data(), ws);
    std::fill(grad.begin(), grad.end(), 0.0);
    net_backward(spec, params, ws, &dout, grad.data());
    benchmark::DoNotOptimize(grad.data());
  }
}
BENCHMARK(bench_value_forward_backward);

void bench_log_prob_grad(benchmark::State& state) {
  const NetSpec spec{75, {8, 8}, 4};
  const ParamVector params = init_params(spec, 1);
  Rng rng = make_rng(2);
  const std::vector<double> obs = random_obs(spec.input_dim, rng);
  for (auto _ : state) {
    const LogProbGrad g = log_prob_grad(spec, params, obs, 2);
    benchmark::DoNotOptimize(g.log_prob);
  }
}
BENCHMARK(bench_log_prob_grad);

void bench_env_step(benchmark::State& state) {
  auto env = make_env("foraging");
  env->reset(7);
  Rng rng = make_rng(3);
  for (auto _ : state) {
    const StepResult r = env->step(uniform_below(rng, env->num_actions()));
    if (r.done) env->reset(7);
    benchmark::DoNotOptimize(r.reward);
  }
}
BENCHMARK(bench_env_step);

void bench_collect_1k(benchmark::State& state) {
  const NetSpec spec{75, {8, 8}, 4};
  const ParamVector params = init_params(spec, 1);
  auto env = make_env("foraging");
  RolloutCollector collector(*env, 42);
  for (auto _ : state) {
    RolloutBuffer buf = collector.collect(spec, params, 1024);
    benchmark::DoNotOptimize(buf.size());
  }
}
BENCHMARK(bench_collect_1k)->Unit(benchmark::kMillisecond);

// Eleven event channels (hopper buckets); the contraction pays off when the
// naive path must materialize one policy-gradient column per channel.
void bench_outer_grad(benchmark::State& state) {
  const NetSpec spec{2, {64, 64}, 5};
  const ParamVector params = init_params(spec, 1);
  RolloutBuffer buf = collect_batch("synth_hopper", 1024, spec, params);
  const std::vector<double> w(11, 0.1);
  const std::vector<double> w0(11, 0.1);
  for (auto _ : state) {
    const std::vector<double> g = outer_grad(buf, spec, params, w, w0, 0.99,
                                             1e-3, RegMode::weight_anchor);
    benchmark::DoNotOptimize(g.data());
  }
}
BENCHMARK(bench_outer_grad)->Unit(benchmark::kMillisecond);

void bench_outer_grad_naive(benchmark::State& state) {
  const NetSpec spec{2, {64, 64}, 5};
  const ParamVector params = init_params(spec, 1);
  RolloutBuffer buf = collect_batch("synth_hopper", 1024, spec, params);
  for (auto _ : state) {
    const std::vector<double> z_ex = motivation_ex(buf, spec, params, 0.99);
    std::vector<double> g(11, 0.0);
    for (int i = 0; i < 11; ++i) {
      std::vector<double> e(11, 0.0);
      e[i] = 1.0;
      const std::vector<double> col =
          motivation_in(buf, spec, params, e, 0.99);
      for (std::size_t j = 0; j < col.size(); ++j) g[i] += z_ex[j] * col[j];
    }
    benchmark::DoNotOptimize(g.data());
  }
}
BENCHMARK(bench_outer_grad_naive)->Unit(benchmark::kMillisecond);

void bench_ppo_update(benchmark::State& state) {
  const NetSpec pspec{75, {8, 8}, 4};
  const NetSpec vspec{75, {32, 32}, 1};
  RolloutBuffer buf = collect_batch("foraging", 1024, pspec,
                                    init_params(pspec, 1));
  PpoConfig cfg;
  cfg.epochs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    state.PauseTiming();
    Agent agent = Agent::make(75, 4, {8, 8}, {32, 32}, cfg.lr_policy,
                              cfg.lr_value, 1);
    Rng rng = make_rng(9);
    state.ResumeTiming();
    const PpoDiagnostics d =
        ppo_update(buf, buf.extrinsic_rewards(), agent, cfg, rng);
    benchmark::DoNotOptimize(d.policy_loss);
  }
}
BENCHMARK(bench_ppo_update)->Arg(1)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
