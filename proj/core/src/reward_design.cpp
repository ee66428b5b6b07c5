#include "mbrd/reward_design.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace mbrd {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

// Writes g_t = grad_theta log pi(a_t|s_t) into `grad` (overwritten).
void score_into(const NetSpec& spec, const ParamVector& policy,
                const Transition& tr, NetWorkspace& ws,
                std::vector<double>& grad) {
  net_forward(spec, policy, tr.obs.data(), ws);
  std::vector<double> dlogits = softmax(ws.acts.back());
  for (double& d : dlogits) d = -d;
  dlogits[static_cast<std::size_t>(tr.action)] += 1.0;
  std::fill(grad.begin(), grad.end(), 0.0);
  net_backward(spec, policy, ws, dlogits.data(), grad.data());
}

// (1/B) sum_t coeff[t] * g_t over the whole buffer.
std::vector<double> score_weighted_mean(const RolloutBuffer& buf,
                                        const NetSpec& spec,
                                        const ParamVector& policy,
                                        const std::vector<double>& coeff) {
  const int B = buf.size();
  if (B == 0)
    throw std::invalid_argument("score_weighted_mean: empty rollout buffer");
  std::vector<double> z(static_cast<std::size_t>(policy.size()), 0.0);
  std::vector<double> g(z.size(), 0.0);
  NetWorkspace ws;
  for (int t = 0; t < B; ++t) {
    score_into(spec, policy, buf.transitions[static_cast<std::size_t>(t)], ws, g);
    const double c = coeff[static_cast<std::size_t>(t)];
    for (std::size_t j = 0; j < z.size(); ++j) z[j] += c * g[j];
  }
  for (double& zj : z) zj /= B;
  return z;
}

OuterStats compute_outer(const RolloutBuffer& buf, const NetSpec& spec,
                         const ParamVector& policy,
                         const std::vector<double>& w,
                         const std::vector<double>& w_init, double gamma,
                         double beta, RegMode mode) {
  const int B = buf.size();
  if (B == 0) throw std::invalid_argument("outer_grad: empty rollout buffer");
  const std::size_t n = w.size();
  if (w_init.size() != n)
    throw std::invalid_argument("outer_grad: w/w_init size mismatch");
  if (buf.transitions.front().events.size() != n)
    throw std::invalid_argument("outer_grad: event dim does not match weights");

  const std::vector<double> g_ex =
      mc_returns(buf.extrinsic_rewards(), buf.dones(), gamma);
  const std::vector<std::vector<double>> g_rho = event_returns(buf, gamma);

  const std::size_t P = static_cast<std::size_t>(policy.size());
  OuterStats st;
  st.z_ex.assign(P, 0.0);
  st.z_in.assign(P, 0.0);

  NetWorkspace ws;
  std::vector<double> g(P, 0.0);
  for (int t = 0; t < B; ++t) {
    const std::size_t ti = static_cast<std::size_t>(t);
    score_into(spec, policy, buf.transitions[ti], ws, g);
    const double cex = g_ex[ti];
    const double cin = dot(w, g_rho[ti]);
    for (std::size_t j = 0; j < P; ++j) {
      st.z_ex[j] += cex * g[j];
      st.z_in[j] += cin * g[j];
    }
  }
  for (std::size_t j = 0; j < P; ++j) {
    st.z_ex[j] /= B;
    st.z_in[j] /= B;
  }
  st.z_ex_norm = norm2(st.z_ex);
  st.z_in_norm = norm2(st.z_in);
  st.cosine = alignment_cosine(st.z_ex, st.z_in);

  // Second pass contracts the mixed Jacobian against z_ex (and, for the
  // z-norm regularizer, against z_in) without ever forming it:
  //   grad_i = 1/B sum_t (z_ex . g_t) G_rho[t][i] - beta * reg_i.
  std::vector<double> first(n, 0.0);
  std::vector<double> reg(n, 0.0);
  const bool reg_pass = mode == RegMode::z_norm && st.z_in_norm >= 1e-12;
  for (int t = 0; t < B; ++t) {
    const std::size_t ti = static_cast<std::size_t>(t);
    score_into(spec, policy, buf.transitions[ti], ws, g);
    const double s_ex = dot(st.z_ex, g);
    for (std::size_t i = 0; i < n; ++i) first[i] += s_ex * g_rho[ti][i];
    if (reg_pass) {
      const double s_in = dot(st.z_in, g);
      for (std::size_t i = 0; i < n; ++i) reg[i] += s_in * g_rho[ti][i];
    }
  }

  st.grad.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) st.grad[i] = first[i] / B;
  if (mode == RegMode::z_norm) {
    if (reg_pass)
      for (std::size_t i = 0; i < n; ++i)
        st.grad[i] -= beta * reg[i] / (B * st.z_in_norm);
  } else {
    for (std::size_t i = 0; i < n; ++i)
      st.grad[i] -= beta * 2.0 * (w[i] - w_init[i]);
  }
  return st;
}

}  // namespace

RegMode parse_reg_mode(const std::string& s) {
  if (s == "z-norm") return RegMode::z_norm;
  if (s == "weight-anchor") return RegMode::weight_anchor;
  throw std::invalid_argument("unknown reg mode: " + s);
}

std::string reg_mode_name(RegMode m) {
  return m == RegMode::z_norm ? "z-norm" : "weight-anchor";
}

IntrinsicWeights IntrinsicWeights::make(int n, double init_value,
                                        double outer_lr) {
  if (n < 1) throw std::invalid_argument("IntrinsicWeights: dim must be >= 1");
  IntrinsicWeights iw;
  iw.w.assign(static_cast<std::size_t>(n), init_value);
  iw.w_init = iw.w;
  iw.opt = OptimizerState::make(n, outer_lr);
  // Long-memory moments: per-update alignment estimates are noisy (a few
  // episodes per batch), so the first moment averages ~30 updates before the
  // sign settles, and the second moment keeps early gradient scale so a weak
  // late regularizer pull cannot drift weights at full step size.
  iw.opt.beta1 = 0.97;
  iw.opt.beta2 = 0.9999;
  return iw;
}

double intrinsic_reward(const std::vector<double>& w, const EventVector& rho) {
  if (w.size() != rho.size())
    throw std::invalid_argument("intrinsic_reward: size mismatch");
  double r = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) r += w[i] * rho[i];
  return r;
}

std::vector<std::vector<double>> event_returns(const RolloutBuffer& buf,
                                               double gamma) {
  const int B = buf.size();
  if (B == 0) throw std::invalid_argument("event_returns: empty rollout buffer");
  const std::size_t n = buf.transitions.front().events.size();
  std::vector<std::vector<double>> g(static_cast<std::size_t>(B),
                                     std::vector<double>(n, 0.0));
  std::vector<double> acc(n, 0.0);
  for (int t = B - 1; t >= 0; --t) {
    const Transition& tr = buf.transitions[static_cast<std::size_t>(t)];
    if (tr.events.size() != n)
      throw std::invalid_argument("event_returns: ragged event vectors");
    if (tr.done) std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      acc[i] = tr.events[i] + gamma * acc[i];
    g[static_cast<std::size_t>(t)] = acc;
  }
  return g;
}

std::vector<double> motivation_ex(const RolloutBuffer& buf, const NetSpec& spec,
                                  const ParamVector& policy, double gamma) {
  return score_weighted_mean(
      buf, spec, policy, mc_returns(buf.extrinsic_rewards(), buf.dones(), gamma));
}

std::vector<double> motivation_in(const RolloutBuffer& buf, const NetSpec& spec,
                                  const ParamVector& policy,
                                  const std::vector<double>& w, double gamma) {
  std::vector<double> r_in(static_cast<std::size_t>(buf.size()), 0.0);
  for (std::size_t t = 0; t < r_in.size(); ++t)
    r_in[t] = intrinsic_reward(w, buf.transitions[t].events);
  return score_weighted_mean(buf, spec, policy,
                             mc_returns(r_in, buf.dones(), gamma));
}

std::vector<double> outer_grad(const RolloutBuffer& buf, const NetSpec& spec,
                               const ParamVector& policy,
                               const std::vector<double>& w,
                               const std::vector<double>& w_init, double gamma,
                               double beta, RegMode mode) {
  return compute_outer(buf, spec, policy, w, w_init, gamma, beta, mode).grad;
}

bool outer_update(IntrinsicWeights& weights, const std::vector<double>& grad) {
  if (static_cast<int>(grad.size()) != weights.dim())
    throw std::invalid_argument("outer_update: gradient size mismatch");
  for (double gi : grad)
    if (!std::isfinite(gi)) return false;
  // Adam minimizes; ascend by feeding the negated gradient.
  std::vector<double> neg(grad.size());
  for (std::size_t i = 0; i < grad.size(); ++i) neg[i] = -grad[i];
  adaptive_step(weights.w, neg, weights.opt);
  return true;
}

double alignment_cosine(const std::vector<double>& a,
                        const std::vector<double>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("alignment_cosine: size mismatch");
  const double na = norm2(a);
  const double nb = norm2(b);
  if (na < 1e-12 || nb < 1e-12) return 0.0;
  return dot(a, b) / (na * nb);
}

OuterStats outer_stats(const RolloutBuffer& buf, const NetSpec& spec,
                       const ParamVector& policy,
                       const IntrinsicWeights& weights, double gamma,
                       double beta, RegMode mode) {
  return compute_outer(buf, spec, policy, weights.w, weights.w_init, gamma,
                       beta, mode);
}

double count_bonus(const EventCounts& counts, const EventVector& rho) {
  if (counts.counts.size() != rho.size())
    throw std::invalid_argument("count_bonus: size mismatch");
  double b = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (rho[i] < 1) continue;
    if (counts.counts[i] < 1)
      throw std::invalid_argument(
          "count_bonus: counts must include the current occurrence");
    b += std::sqrt(1.0 / static_cast<double>(counts.counts[i]));
  }
  return b;
}

std::vector<double> accumulate_bonuses(const RolloutBuffer& buf,
                                       EventCounts& counts) {
  std::vector<double> out(static_cast<std::size_t>(buf.size()), 0.0);
  for (std::size_t t = 0; t < out.size(); ++t) {
    const EventVector& rho = buf.transitions[t].events;
    if (rho.size() != counts.counts.size())
      throw std::invalid_argument("accumulate_bonuses: size mismatch");
    for (std::size_t i = 0; i < rho.size(); ++i) counts.counts[i] += rho[i];
    out[t] = count_bonus(counts, rho);
  }
  return out;
}

double pbrs_shape(double phi_s, double phi_next, double gamma, bool done) {
  return (done ? 0.0 : gamma * phi_next) - phi_s;
}

std::vector<double> training_rewards(const RolloutBuffer& buf,
                                     const RewardSpec& spec) {
  const std::size_t B = static_cast<std::size_t>(buf.size());
  std::vector<double> r(B, 0.0);
  switch (spec.kind) {
    case RewardSourceKind::extrinsic:
      for (std::size_t t = 0; t < B; ++t) r[t] = buf.transitions[t].r_ex;
      break;
    case RewardSourceKind::intrinsic:
      if (spec.w == nullptr)
        throw std::invalid_argument("training_rewards: intrinsic needs weights");
      for (std::size_t t = 0; t < B; ++t)
        r[t] = intrinsic_reward(*spec.w, buf.transitions[t].events);
      break;
    case RewardSourceKind::extrinsic_cb: {
      if (spec.counts == nullptr)
        throw std::invalid_argument("training_rewards: cb needs counts");
      const std::vector<double> bonus = accumulate_bonuses(buf, *spec.counts);
      for (std::size_t t = 0; t < B; ++t)
        r[t] = buf.transitions[t].r_ex + bonus[t];
      break;
    }
    case RewardSourceKind::extrinsic_pbrs:
      for (std::size_t t = 0; t < B; ++t) {
        const Transition& tr = buf.transitions[t];
        r[t] = tr.r_ex + pbrs_shape(tr.phi, tr.phi_next, spec.gamma, tr.done);
      }
      break;
  }
  return r;
}

}  // namespace mbrd
