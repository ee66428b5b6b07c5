#pragma once

#include <string>
#include <vector>

#include "mbrd/net.hpp"
#include "mbrd/rollout.hpp"

namespace mbrd {

// Regularizer of the outer objective J_o = z_ex . z_in - beta * reg:
//   z_norm        reg = ||z_in||
//   weight_anchor reg = ||w - w_init||^2
enum class RegMode { z_norm, weight_anchor };

RegMode parse_reg_mode(const std::string& s);  // "z-norm" | "weight-anchor"
std::string reg_mode_name(RegMode m);

// Learned linear intrinsic-reward weights, one per event channel, with the
// anchor vector and the Adam state of the outer ascent.
struct IntrinsicWeights {
  std::vector<double> w;
  std::vector<double> w_init;
  OptimizerState opt;

  static IntrinsicWeights make(int n, double init_value, double outer_lr);
  int dim() const { return static_cast<int>(w.size()); }
};

// R_in = w . rho
double intrinsic_reward(const std::vector<double>& w, const EventVector& rho);

// Per-transition discounted future event counts G_rho, one vector of length
// n per step, reset at episode boundaries. Satisfies w . G_rho[t] =
// mc_returns of the intrinsic rewards.
std::vector<std::vector<double>> event_returns(const RolloutBuffer& buf,
                                               double gamma);

// Batch-mean policy-gradient vector of the extrinsic Monte-Carlo return:
// z_ex = 1/B sum_t G_ex[t] * grad_theta log pi(a_t|s_t).
std::vector<double> motivation_ex(const RolloutBuffer& buf, const NetSpec& spec,
                                  const ParamVector& policy, double gamma);

// Same with the intrinsic return G_in[t] = w . G_rho[t]; linear in w.
std::vector<double> motivation_in(const RolloutBuffer& buf, const NetSpec& spec,
                                  const ParamVector& policy,
                                  const std::vector<double>& w, double gamma);

// Gradient of the alignment objective with respect to w, computed without
// materializing the n x |theta| Jacobian:
//   grad = 1/B sum_t (z_ex . g_t) G_rho[t] - beta * reg_grad,
// where g_t = grad_theta log pi(a_t|s_t).
std::vector<double> outer_grad(const RolloutBuffer& buf, const NetSpec& spec,
                               const ParamVector& policy,
                               const std::vector<double>& w,
                               const std::vector<double>& w_init, double gamma,
                               double beta, RegMode mode);

// One adaptive ascent step on J_o. Returns false (and leaves w unchanged)
// when the gradient has non-finite entries.
bool outer_update(IntrinsicWeights& weights, const std::vector<double>& grad);

// cos of the angle between two motivations; 0 when either norm < 1e-12.
double alignment_cosine(const std::vector<double>& a,
                        const std::vector<double>& b);

// Everything one outer update needs, sharing a single pass over the buffer.
struct OuterStats {
  std::vector<double> z_ex;
  std::vector<double> z_in;
  std::vector<double> grad;
  double cosine = 0.0;
  double z_ex_norm = 0.0;
  double z_in_norm = 0.0;
};
OuterStats outer_stats(const RolloutBuffer& buf, const NetSpec& spec,
                       const ParamVector& policy, const IntrinsicWeights& weights,
                       double gamma, double beta, RegMode mode);

// ---- count-based bonus baseline ----

// Lifetime occurrence count per event channel.
struct EventCounts {
  std::vector<long> counts;
  static EventCounts make(int n) { return {std::vector<long>(n, 0)}; }
};

// sqrt(1/n_i) summed over the channels firing this step; counts must already
// include the current occurrence.
double count_bonus(const EventCounts& counts, const EventVector& rho);

// Walks the buffer in order, updating counts and returning per-step bonuses.
std::vector<double> accumulate_bonuses(const RolloutBuffer& buf,
                                       EventCounts& counts);

// ---- potential-based shaping baseline ----

// F = gamma * phi(s') - phi(s), with phi(s') zeroed at terminal transitions.
double pbrs_shape(double phi_s, double phi_next, double gamma, bool done);

// ---- training reward streams ----

enum class RewardSourceKind { extrinsic, intrinsic, extrinsic_cb, extrinsic_pbrs };

struct RewardSpec {
  RewardSourceKind kind = RewardSourceKind::extrinsic;
  const std::vector<double>* w = nullptr;  // intrinsic
  EventCounts* counts = nullptr;           // extrinsic_cb
  double gamma = 0.999;                    // extrinsic_pbrs
};

// The per-step reward sequence a PPO update trains on. The intrinsic source
// reads only events and w; the extrinsic source reads only r_ex.
std::vector<double> training_rewards(const RolloutBuffer& buf,
                                     const RewardSpec& spec);

}  // namespace mbrd
