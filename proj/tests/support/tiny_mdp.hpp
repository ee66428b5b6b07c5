#pragma once

// Exact machinery for small tabular MDPs: linear-solve policy evaluation,
// closed-form policy gradients for softmax-tabular policies, and exact policy
// iteration. Everything here is an independent oracle: no code from the
// trained-artifact side is reused.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mbrd/rng.hpp"

namespace mbrd::testing {

// Infinite-horizon discounted MDP with per-(s,a) event features.
struct TinyMdp {
  int S = 0;
  int A = 0;
  int n_events = 0;
  double gamma = 0.9;
  std::vector<double> P;     // [s*A*S + a*S + s2]
  std::vector<double> r_ex;  // [s*A + a]
  std::vector<double> rho;   // [(s*A + a)*n_events + i]
  std::vector<double> mu0;   // [s]

  double p(int s, int a, int s2) const { return P[(s * A + a) * S + s2]; }
  double feat(int s, int a, int i) const {
    return rho[(s * A + a) * n_events + i];
  }
};

// Dense Ax=b with partial pivoting; A row-major nn x nn, consumed.
inline std::vector<double> solve_linear(std::vector<double> A,
                                        std::vector<double> b, int nn) {
  for (int col = 0; col < nn; ++col) {
    int piv = col;
    for (int r = col + 1; r < nn; ++r)
      if (std::abs(A[r * nn + col]) > std::abs(A[piv * nn + col])) piv = r;
    if (std::abs(A[piv * nn + col]) < 1e-14)
      throw std::runtime_error("solve_linear: singular matrix");
    if (piv != col) {
      for (int c = 0; c < nn; ++c) std::swap(A[col * nn + c], A[piv * nn + c]);
      std::swap(b[col], b[piv]);
    }
    const double d = A[col * nn + col];
    for (int r = col + 1; r < nn; ++r) {
      const double f = A[r * nn + col] / d;
      if (f == 0.0) continue;
      for (int c = col; c < nn; ++c) A[r * nn + c] -= f * A[col * nn + c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(nn, 0.0);
  for (int r = nn - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < nn; ++c) s -= A[r * nn + c] * x[c];
    x[r] = s / A[r * nn + r];
  }
  return x;
}

inline TinyMdp random_mdp(Rng& rng, int max_states = 6, int max_actions = 3,
                          int n_events = 3) {
  TinyMdp m;
  m.S = 2 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(max_states - 1)));
  m.A = 2 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(max_actions - 1)));
  m.n_events = n_events;
  m.gamma = 0.8 + 0.15 * uniform01(rng);
  m.P.assign(static_cast<std::size_t>(m.S * m.A * m.S), 0.0);
  m.r_ex.assign(static_cast<std::size_t>(m.S * m.A), 0.0);
  m.rho.assign(static_cast<std::size_t>(m.S * m.A * n_events), 0.0);
  m.mu0.assign(static_cast<std::size_t>(m.S), 0.0);

  for (int s = 0; s < m.S; ++s)
    for (int a = 0; a < m.A; ++a) {
      double z = 0.0;
      for (int s2 = 0; s2 < m.S; ++s2) {
        const double e = -std::log(uniform01(rng) + 1e-12);
        m.P[(s * m.A + a) * m.S + s2] = e;
        z += e;
      }
      for (int s2 = 0; s2 < m.S; ++s2) m.P[(s * m.A + a) * m.S + s2] /= z;
      m.r_ex[s * m.A + a] = 2.0 * uniform01(rng) - 1.0;
      for (int i = 0; i < n_events; ++i)
        m.rho[(s * m.A + a) * n_events + i] =
            static_cast<double>(uniform_below(rng, 3));  // counts in {0,1,2}
    }
  double z0 = 0.0;
  for (int s = 0; s < m.S; ++s) {
    const double e = -std::log(uniform01(rng) + 1e-12);
    m.mu0[s] = e;
    z0 += e;
  }
  for (int s = 0; s < m.S; ++s) m.mu0[s] /= z0;
  return m;
}

// pi[s*A+a] = softmax over theta[s*A .. s*A+A-1]
inline std::vector<double> policy_probs(const TinyMdp& m,
                                        const std::vector<double>& theta) {
  std::vector<double> pi(theta.size(), 0.0);
  for (int s = 0; s < m.S; ++s) {
    double mx = theta[s * m.A];
    for (int a = 1; a < m.A; ++a) mx = std::max(mx, theta[s * m.A + a]);
    double z = 0.0;
    for (int a = 0; a < m.A; ++a) {
      pi[s * m.A + a] = std::exp(theta[s * m.A + a] - mx);
      z += pi[s * m.A + a];
    }
    for (int a = 0; a < m.A; ++a) pi[s * m.A + a] /= z;
  }
  return pi;
}

// J = mu0 . V_pi for the per-(s,a) reward vector r, by solving
// (I - gamma P_pi) V = r_pi. Optionally exports V and Q.
inline double exact_value(const TinyMdp& m, const std::vector<double>& pi,
                          const std::vector<double>& r,
                          std::vector<double>* V_out = nullptr,
                          std::vector<double>* Q_out = nullptr) {
  std::vector<double> A(static_cast<std::size_t>(m.S * m.S), 0.0);
  std::vector<double> b(static_cast<std::size_t>(m.S), 0.0);
  for (int s = 0; s < m.S; ++s) {
    A[s * m.S + s] = 1.0;
    for (int a = 0; a < m.A; ++a) {
      b[s] += pi[s * m.A + a] * r[s * m.A + a];
      for (int s2 = 0; s2 < m.S; ++s2)
        A[s * m.S + s2] -= m.gamma * pi[s * m.A + a] * m.p(s, a, s2);
    }
  }
  const std::vector<double> V = solve_linear(A, b, m.S);
  if (Q_out) {
    Q_out->assign(static_cast<std::size_t>(m.S * m.A), 0.0);
    for (int s = 0; s < m.S; ++s)
      for (int a = 0; a < m.A; ++a) {
        double q = r[s * m.A + a];
        for (int s2 = 0; s2 < m.S; ++s2)
          q += m.gamma * m.p(s, a, s2) * V[s2];
        (*Q_out)[s * m.A + a] = q;
      }
  }
  double J = 0.0;
  for (int s = 0; s < m.S; ++s) J += m.mu0[s] * V[s];
  if (V_out) *V_out = V;
  return J;
}

// Discounted state occupancy d(s) = sum_t gamma^t P(s_t = s), from
// (I - gamma P_pi^T) d = mu0.
inline std::vector<double> occupancy(const TinyMdp& m,
                                     const std::vector<double>& pi) {
  std::vector<double> A(static_cast<std::size_t>(m.S * m.S), 0.0);
  for (int s = 0; s < m.S; ++s) {
    A[s * m.S + s] += 1.0;
    for (int a = 0; a < m.A; ++a)
      for (int s2 = 0; s2 < m.S; ++s2)
        A[s2 * m.S + s] -= m.gamma * pi[s * m.A + a] * m.p(s, a, s2);
  }
  return solve_linear(A, m.mu0, m.S);
}

// dJ/dtheta[s,b] = d(s) pi(b|s) (Q(s,b) - V(s)) for the softmax-tabular
// policy; exact, no sampling.
inline std::vector<double> exact_policy_gradient(const TinyMdp& m,
                                                 const std::vector<double>& theta,
                                                 const std::vector<double>& r) {
  const std::vector<double> pi = policy_probs(m, theta);
  std::vector<double> V, Q;
  exact_value(m, pi, r, &V, &Q);
  const std::vector<double> d = occupancy(m, pi);
  std::vector<double> g(theta.size(), 0.0);
  for (int s = 0; s < m.S; ++s)
    for (int b = 0; b < m.A; ++b)
      g[s * m.A + b] = d[s] * pi[s * m.A + b] * (Q[s * m.A + b] - V[s]);
  return g;
}

// Exact optimal greedy policy via policy iteration (finite convergence).
inline std::vector<int> optimal_greedy(const TinyMdp& m,
                                       const std::vector<double>& r) {
  std::vector<int> act(static_cast<std::size_t>(m.S), 0);
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<double> pi(static_cast<std::size_t>(m.S * m.A), 0.0);
    for (int s = 0; s < m.S; ++s) pi[s * m.A + act[s]] = 1.0;
    std::vector<double> V, Q;
    exact_value(m, pi, r, &V, &Q);
    bool changed = false;
    for (int s = 0; s < m.S; ++s) {
      int best = 0;
      for (int a = 1; a < m.A; ++a)
        if (Q[s * m.A + a] > Q[s * m.A + best]) best = a;
      if (best != act[s]) {
        act[s] = best;
        changed = true;
      }
    }
    if (!changed) return act;
  }
  throw std::runtime_error("optimal_greedy: policy iteration did not settle");
}

// r'(s,a) = r(s,a) + gamma * E[phi(s')] - phi(s)
inline std::vector<double> shaped_reward(const TinyMdp& m,
                                         const std::vector<double>& r,
                                         const std::vector<double>& phi) {
  std::vector<double> out(r.size(), 0.0);
  for (int s = 0; s < m.S; ++s)
    for (int a = 0; a < m.A; ++a) {
      double ephi = 0.0;
      for (int s2 = 0; s2 < m.S; ++s2) ephi += m.p(s, a, s2) * phi[s2];
      out[s * m.A + a] = r[s * m.A + a] + m.gamma * ephi - phi[s];
    }
  return out;
}

// Per-(s,a) reward projecting event features onto one channel, for building
// the exact mixed-derivative columns.
inline std::vector<double> event_reward(const TinyMdp& m, int channel) {
  std::vector<double> r(static_cast<std::size_t>(m.S * m.A), 0.0);
  for (int s = 0; s < m.S; ++s)
    for (int a = 0; a < m.A; ++a) r[s * m.A + a] = m.feat(s, a, channel);
  return r;
}

// Linear combination w . rho as a per-(s,a) reward.
inline std::vector<double> intrinsic_tabular_reward(const TinyMdp& m,
                                                    const std::vector<double>& w) {
  std::vector<double> r(static_cast<std::size_t>(m.S * m.A), 0.0);
  for (int s = 0; s < m.S; ++s)
    for (int a = 0; a < m.A; ++a) {
      double v = 0.0;
      for (int i = 0; i < m.n_events; ++i) v += w[i] * m.feat(s, a, i);
      r[s * m.A + a] = v;
    }
  return r;
}

}  // namespace mbrd::testing
