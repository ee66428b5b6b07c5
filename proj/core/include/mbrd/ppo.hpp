#pragma once

#include <cstdint>
#include <vector>

#include "mbrd/net.hpp"
#include "mbrd/reward_design.hpp"
#include "mbrd/rng.hpp"
#include "mbrd/rollout.hpp"

namespace mbrd {

struct PpoConfig {
  double gamma = 0.999;
  double gae_lambda = 0.95;
  double clip_eps = 0.2;
  int epochs = 50;
  int minibatch = 0;  // 0 = full batch
  double lr_policy = 1.5e-5;
  double lr_value = 1e-3;
  double value_coef = 0.5;
  double entropy_coef = 0.0;
  bool normalize_adv = true;
};

struct AdvantageBatch {
  std::vector<double> advantages;  // normalized when configured
  std::vector<double> raw_advantages;
  std::vector<double> value_targets;  // raw advantage + value baseline
};

// Generalized advantage estimates over the buffer for the given reward
// sequence, bootstrapping from the value of the final next-state when the
// buffer is cut mid-episode.
AdvantageBatch gae_advantages(const RolloutBuffer& buf,
                              const std::vector<double>& rewards,
                              const NetSpec& value_spec,
                              const ParamVector& value, const PpoConfig& cfg);

// Policy and value networks plus their optimizer state.
struct Agent {
  NetSpec policy_spec;
  NetSpec value_spec;
  ParamVector policy;
  ParamVector value;
  OptimizerState policy_opt;
  OptimizerState value_opt;

  static Agent make(int obs_dim, int num_actions,
                    const std::vector<int>& policy_hidden,
                    const std::vector<int>& value_hidden, double lr_policy,
                    double lr_value, std::uint64_t seed);
};

// Means over the last optimizing epoch.
struct PpoDiagnostics {
  double policy_loss = 0.0;  // negated clipped surrogate
  double value_loss = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  double approx_kl = 0.0;
};

// Ascent gradient of the mean clipped-surrogate objective
//   1/B sum_t min(ratio_t A_t, clip(ratio_t) A_t)
// with ratios anchored at the buffer's stored behavior log-probs. ppo_update
// steps along this same per-sample computation.
std::vector<double> surrogate_gradient(const RolloutBuffer& buf,
                                       const std::vector<double>& advantages,
                                       const NetSpec& spec,
                                       const ParamVector& policy,
                                       double clip_eps);

// Runs cfg.epochs of clipped-surrogate ascent on the policy and squared-error
// descent on the value head, training on the given per-step rewards. The
// buffer's stored behavior log-probs anchor the ratios. Throws NumericalError
// when a loss or gradient goes non-finite; parameters keep their last good
// values in that case.
PpoDiagnostics ppo_update(const RolloutBuffer& buf,
                          const std::vector<double>& rewards, Agent& agent,
                          const PpoConfig& cfg, Rng& rng);

// Convenience overload resolving the reward source first.
PpoDiagnostics ppo_update(const RolloutBuffer& buf, const RewardSpec& source,
                          Agent& agent, const PpoConfig& cfg, Rng& rng);

}  // namespace mbrd
