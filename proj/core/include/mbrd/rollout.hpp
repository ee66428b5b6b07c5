#pragma once

#include <cstdint>
#include <vector>

#include "mbrd/env.hpp"
#include "mbrd/net.hpp"
#include "mbrd/rng.hpp"

namespace mbrd {

struct Transition {
  std::vector<double> obs;
  int action = 0;
  double r_ex = 0.0;
  std::vector<double> next_obs;
  EventVector events;
  bool done = false;
  double logp_behavior = 0.0;
  double phi = 0.0;       // shaping potential at obs
  double phi_next = 0.0;  // shaping potential at next_obs
};

// On-policy buffer: filled by one collect, consumed by one update, dropped.
struct RolloutBuffer {
  std::vector<Transition> transitions;
  int size() const { return static_cast<int>(transitions.size()); }
  std::vector<double> extrinsic_rewards() const;
  std::vector<std::uint8_t> dones() const;
};

// Discounted suffix sums, reset at episode boundaries. A trailing episode
// cut off by the buffer edge sums to the edge.
std::vector<double> mc_returns(const std::vector<double>& rewards,
                               const std::vector<std::uint8_t>& dones,
                               double gamma);

// Steps the environment with the sampled softmax policy. Episode state
// persists across collect() calls, so a buffer may end mid-episode.
class RolloutCollector {
 public:
  RolloutCollector(Env& env, std::uint64_t seed);

  RolloutBuffer collect(const NetSpec& policy_spec, const ParamVector& policy,
                        int steps);

 private:
  Env& env_;
  Rng rng_;
  std::uint64_t episode_ = 0;
  std::vector<double> obs_;
  bool need_reset_ = true;
};

// One-call variant with a fresh collector.
RolloutBuffer collect_rollout(Env& env, const NetSpec& policy_spec,
                              const ParamVector& policy, int steps,
                              std::uint64_t seed);

// Cumulative extrinsic reward of `episodes` greedy (argmax) episodes.
std::vector<double> evaluate_policy(Env& env, const NetSpec& policy_spec,
                                    const ParamVector& policy, int episodes,
                                    std::uint64_t seed);

}  // namespace mbrd
