#include "mbrd/rollout.hpp"

#include <algorithm>
#include <cmath>

namespace mbrd {

std::vector<double> RolloutBuffer::extrinsic_rewards() const {
  std::vector<double> r(transitions.size());
  for (size_t i = 0; i < transitions.size(); ++i) r[i] = transitions[i].r_ex;
  return r;
}

std::vector<std::uint8_t> RolloutBuffer::dones() const {
  std::vector<std::uint8_t> d(transitions.size());
  for (size_t i = 0; i < transitions.size(); ++i)
    d[i] = transitions[i].done ? 1 : 0;
  return d;
}

std::vector<double> mc_returns(const std::vector<double>& rewards,
                               const std::vector<std::uint8_t>& dones,
                               double gamma) {
  if (rewards.size() != dones.size())
    throw std::invalid_argument("rewards/dones length mismatch");
  std::vector<double> g(rewards.size());
  double acc = 0.0;
  for (int i = static_cast<int>(rewards.size()) - 1; i >= 0; --i) {
    if (dones[i]) acc = 0.0;
    acc = rewards[i] + gamma * acc;
    g[i] = acc;
  }
  return g;
}

RolloutCollector::RolloutCollector(Env& env, std::uint64_t seed)
    : env_(env), rng_(make_rng(seed, 1)) {
  // episode seeds come from a stream separate from action sampling
  episode_ = split_seed(seed, 2);
}

RolloutBuffer RolloutCollector::collect(const NetSpec& policy_spec,
                                        const ParamVector& policy, int steps) {
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  RolloutBuffer buf;
  buf.transitions.reserve(steps);
  for (int i = 0; i < steps; ++i) {
    if (need_reset_) {
      obs_ = env_.reset(episode_++);
      need_reset_ = false;
    }
    std::vector<double> probs = policy_forward(policy_spec, policy, obs_);
    int action = sample_categorical(rng_, probs);

    Transition t;
    t.obs = obs_;
    t.action = action;
    t.logp_behavior = std::log(probs[action]);
    t.phi = env_.potential();
    StepResult r = env_.step(action);
    t.r_ex = r.reward;
    t.next_obs = r.obs;
    t.events = r.events;
    t.done = r.done;
    t.phi_next = env_.potential();
    buf.transitions.push_back(std::move(t));

    obs_ = r.obs;
    if (r.done) need_reset_ = true;
  }
  return buf;
}

RolloutBuffer collect_rollout(Env& env, const NetSpec& policy_spec,
                              const ParamVector& policy, int steps,
                              std::uint64_t seed) {
  RolloutCollector c(env, seed);
  return c.collect(policy_spec, policy, steps);
}

std::vector<double> evaluate_policy(Env& env, const NetSpec& policy_spec,
                                    const ParamVector& policy, int episodes,
                                    std::uint64_t seed) {
  std::vector<double> returns;
  returns.reserve(episodes);
  for (int ep = 0; ep < episodes; ++ep) {
    std::vector<double> obs = env.reset(split_seed(seed, 1000 + ep));
    double total = 0.0;
    while (true) {
      std::vector<double> probs = policy_forward(policy_spec, policy, obs);
      int action = static_cast<int>(
          std::max_element(probs.begin(), probs.end()) - probs.begin());
      StepResult r = env.step(action);
      total += r.reward;
      obs = r.obs;
      if (r.done) break;
    }
    returns.push_back(total);
  }
  return returns;
}

}  // namespace mbrd
