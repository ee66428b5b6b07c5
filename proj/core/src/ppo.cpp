#include "mbrd/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>

namespace mbrd {

namespace {

// Stable softmax of `logits` into `probs`; returns log of the normalizer so
// the caller gets log-probs as logits[a] - logz.
double softmax_into(const std::vector<double>& logits,
                    std::vector<double>& probs) {
  const double m = *std::max_element(logits.begin(), logits.end());
  probs.resize(logits.size());
  double z = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp(logits[i] - m);
    z += probs[i];
  }
  for (double& p : probs) p /= z;
  return m + std::log(z);
}

struct SurrogatePieces {
  double surr = 0.0;  // min(ratio*A, clip(ratio)*A)
  double logp = 0.0;
  double ratio = 0.0;
  double entropy = 0.0;
  bool gated = false;  // clipped branch active: zero gradient
};

// Forward pass plus the per-sample surrogate terms. `dlogits` receives the
// ascent gradient of the per-sample surrogate w.r.t. the logits (all zero
// when the clip gate is active); the caller scales it and runs the backward
// pass against the workspace left behind here.
SurrogatePieces surrogate_logits(const NetSpec& spec, const ParamVector& policy,
                                 const Transition& tr, double a_t,
                                 double clip_eps, NetWorkspace& ws,
                                 std::vector<double>& probs,
                                 std::vector<double>& dlogits) {
  net_forward(spec, policy, tr.obs.data(), ws);
  SurrogatePieces out;
  const double logz = softmax_into(ws.acts.back(), probs);
  out.logp = ws.acts.back()[static_cast<std::size_t>(tr.action)] - logz;
  out.ratio = std::exp(out.logp - tr.logp_behavior);
  const double clipped =
      std::clamp(out.ratio, 1.0 - clip_eps, 1.0 + clip_eps);
  out.surr = std::min(out.ratio * a_t, clipped * a_t);
  out.gated = (out.ratio > 1.0 + clip_eps && a_t > 0.0) ||
              (out.ratio < 1.0 - clip_eps && a_t < 0.0);
  for (double p : probs) out.entropy -= p * std::log(p);

  std::fill(dlogits.begin(), dlogits.end(), 0.0);
  if (!out.gated) {
    const double c = a_t * out.ratio;
    for (std::size_t i = 0; i < probs.size(); ++i) dlogits[i] = -c * probs[i];
    dlogits[static_cast<std::size_t>(tr.action)] += c;
  }
  return out;
}

}  // namespace

std::vector<double> surrogate_gradient(const RolloutBuffer& buf,
                                       const std::vector<double>& advantages,
                                       const NetSpec& spec,
                                       const ParamVector& policy,
                                       double clip_eps) {
  const int B = buf.size();
  if (B == 0) throw std::invalid_argument("surrogate_gradient: empty buffer");
  if (static_cast<int>(advantages.size()) != B)
    throw std::invalid_argument("surrogate_gradient: advantage size mismatch");
  std::vector<double> grad(static_cast<std::size_t>(policy.size()), 0.0);
  std::vector<double> probs;
  std::vector<double> dlogits(static_cast<std::size_t>(spec.output_dim), 0.0);
  NetWorkspace ws;
  for (int t = 0; t < B; ++t) {
    const std::size_t ti = static_cast<std::size_t>(t);
    const SurrogatePieces sp =
        surrogate_logits(spec, policy, buf.transitions[ti], advantages[ti],
                         clip_eps, ws, probs, dlogits);
    if (sp.gated) continue;
    for (double& d : dlogits) d /= B;
    net_backward(spec, policy, ws, dlogits.data(), grad.data());
  }
  return grad;
}

AdvantageBatch gae_advantages(const RolloutBuffer& buf,
                              const std::vector<double>& rewards,
                              const NetSpec& value_spec,
                              const ParamVector& value, const PpoConfig& cfg) {
  const int B = buf.size();
  if (B == 0) throw std::invalid_argument("gae_advantages: empty buffer");
  if (static_cast<int>(rewards.size()) != B)
    throw std::invalid_argument("gae_advantages: reward size mismatch");

  NetWorkspace ws;
  std::vector<double> v(static_cast<std::size_t>(B), 0.0);
  std::vector<double> v_next(static_cast<std::size_t>(B), 0.0);
  for (int t = 0; t < B; ++t) {
    const std::size_t ti = static_cast<std::size_t>(t);
    net_forward(value_spec, value, buf.transitions[ti].obs.data(), ws);
    v[ti] = ws.acts.back()[0];
    // Terminal next-states contribute nothing; everything else bootstraps,
    // including a trailing episode cut off by the buffer edge.
    if (!buf.transitions[ti].done) {
      net_forward(value_spec, value, buf.transitions[ti].next_obs.data(), ws);
      v_next[ti] = ws.acts.back()[0];
    }
  }

  AdvantageBatch out;
  out.raw_advantages.assign(static_cast<std::size_t>(B), 0.0);
  out.value_targets.assign(static_cast<std::size_t>(B), 0.0);
  double acc = 0.0;
  for (int t = B - 1; t >= 0; --t) {
    const std::size_t ti = static_cast<std::size_t>(t);
    const bool done = buf.transitions[ti].done;
    const double delta = rewards[ti] + cfg.gamma * v_next[ti] - v[ti];
    acc = delta + cfg.gamma * cfg.gae_lambda * (done ? 0.0 : acc);
    out.raw_advantages[ti] = acc;
    out.value_targets[ti] = acc + v[ti];
  }

  out.advantages = out.raw_advantages;
  if (cfg.normalize_adv && B > 1) {
    double mean = 0.0;
    for (double a : out.advantages) mean += a;
    mean /= B;
    double var = 0.0;
    for (double a : out.advantages) var += (a - mean) * (a - mean);
    var /= B;
    const double sd = std::sqrt(var) + 1e-8;
    for (double& a : out.advantages) a = (a - mean) / sd;
  }
  return out;
}

Agent Agent::make(int obs_dim, int num_actions,
                  const std::vector<int>& policy_hidden,
                  const std::vector<int>& value_hidden, double lr_policy,
                  double lr_value, std::uint64_t seed) {
  Agent a;
  a.policy_spec = NetSpec{obs_dim, policy_hidden, num_actions};
  a.value_spec = NetSpec{obs_dim, value_hidden, 1};
  a.policy_spec.validate();
  a.value_spec.validate();
  a.policy = init_params(a.policy_spec, split_seed(seed, 10));
  a.value = init_params(a.value_spec, split_seed(seed, 11));
  a.policy_opt = OptimizerState::make(a.policy.size(), lr_policy);
  a.value_opt = OptimizerState::make(a.value.size(), lr_value);
  return a;
}

PpoDiagnostics ppo_update(const RolloutBuffer& buf,
                          const std::vector<double>& rewards, Agent& agent,
                          const PpoConfig& cfg, Rng& rng) {
  const int B = buf.size();
  if (B == 0) throw std::invalid_argument("ppo_update: empty buffer");
  if (static_cast<int>(rewards.size()) != B)
    throw std::invalid_argument("ppo_update: reward size mismatch");
  if (cfg.epochs < 1) throw std::invalid_argument("ppo_update: epochs < 1");

  const AdvantageBatch adv =
      gae_advantages(buf, rewards, agent.value_spec, agent.value, cfg);

  const std::size_t P = static_cast<std::size_t>(agent.policy.size());
  const std::size_t V = static_cast<std::size_t>(agent.value.size());
  const std::size_t na =
      static_cast<std::size_t>(agent.policy_spec.output_dim);
  std::vector<double> gpol(P, 0.0);
  std::vector<double> gval(V, 0.0);
  std::vector<double> probs;
  std::vector<double> dlogits(na, 0.0);
  NetWorkspace ws_p;
  NetWorkspace ws_v;

  std::vector<int> order(static_cast<std::size_t>(B));
  std::iota(order.begin(), order.end(), 0);
  const int mb = (cfg.minibatch > 0 && cfg.minibatch < B) ? cfg.minibatch : B;

  PpoDiagnostics diag;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (mb < B) std::shuffle(order.begin(), order.end(), rng);
    double sum_pl = 0.0, sum_vl = 0.0, sum_ent = 0.0, sum_clip = 0.0,
           sum_kl = 0.0;
    for (int start = 0; start < B; start += mb) {
      const int end = std::min(start + mb, B);
      const int m = end - start;
      std::fill(gpol.begin(), gpol.end(), 0.0);
      std::fill(gval.begin(), gval.end(), 0.0);
      double batch_pl = 0.0, batch_vl = 0.0;

      for (int k = start; k < end; ++k) {
        const std::size_t t = static_cast<std::size_t>(order[static_cast<std::size_t>(k)]);
        const Transition& tr = buf.transitions[t];
        const double a_t = adv.advantages[t];

        const SurrogatePieces sp =
            surrogate_logits(agent.policy_spec, agent.policy, tr, a_t,
                             cfg.clip_eps, ws_p, probs, dlogits);
        batch_pl += -sp.surr;
        sum_clip += sp.gated ? 1.0 : 0.0;
        sum_kl += tr.logp_behavior - sp.logp;
        sum_ent += sp.entropy;

        if (!sp.gated || cfg.entropy_coef != 0.0) {
          // descend on -(surrogate + entropy bonus), averaged over the batch
          for (double& d : dlogits) d = -d / m;
          if (cfg.entropy_coef != 0.0) {
            const double ce = cfg.entropy_coef / m;
            for (std::size_t i = 0; i < na; ++i)
              dlogits[i] += ce * probs[i] * (std::log(probs[i]) + sp.entropy);
          }
          net_backward(agent.policy_spec, agent.policy, ws_p, dlogits.data(),
                       gpol.data());
        }

        net_forward(agent.value_spec, agent.value, tr.obs.data(), ws_v);
        const double err = ws_v.acts.back()[0] - adv.value_targets[t];
        batch_vl += cfg.value_coef * err * err;
        const double dv = cfg.value_coef * 2.0 * err / m;
        net_backward(agent.value_spec, agent.value, ws_v, &dv, gval.data());
      }

      if (!std::isfinite(batch_pl) || !std::isfinite(batch_vl))
        throw NumericalError("ppo_update: non-finite loss");
      adaptive_step(agent.policy, gpol, agent.policy_opt);
      adaptive_step(agent.value, gval, agent.value_opt);
      sum_pl += batch_pl;
      sum_vl += batch_vl;
    }

    if (epoch == cfg.epochs - 1) {
      diag.policy_loss = sum_pl / B;
      diag.value_loss = sum_vl / B;
      diag.entropy = sum_ent / B;
      diag.clip_fraction = sum_clip / B;
      diag.approx_kl = sum_kl / B;
    }
  }
  return diag;
}

PpoDiagnostics ppo_update(const RolloutBuffer& buf, const RewardSpec& source,
                          Agent& agent, const PpoConfig& cfg, Rng& rng) {
  return ppo_update(buf, training_rewards(buf, source), agent, cfg, rng);
}

}  // namespace mbrd
