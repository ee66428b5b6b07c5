// Acceptance gate: one line per criterion, [PASS]/[FAIL], exit 0 only when
// every selected criterion passes. Each check pins its own tolerances and
// runtime budget. Pass criterion numbers as arguments to run a subset.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "mbrd/env_factory.hpp"
#include "mbrd/harness.hpp"
#include "mbrd/net.hpp"
#include "mbrd/ppo.hpp"
#include "mbrd/reward_design.hpp"
#include "mbrd/rng.hpp"
#include "mbrd/rollout.hpp"
#include "mbrd/wrappers.hpp"
#include "../support/finite_diff.hpp"
#include "../support/kink.hpp"
#include "../support/tiny_mdp.hpp"

using namespace mbrd;
using mbrd::testing::TinyMdp;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

int pool_jobs() {
  const unsigned hw = std::thread::hardware_concurrency();
  return std::max(1, std::min(5, static_cast<int>(hw)));
}

// ---- synthetic batches shared by the gradient checks ----

RolloutBuffer random_buffer(Rng& rng, int obs_dim, int num_actions, int n_events,
                            int B) {
  RolloutBuffer buf;
  buf.transitions.resize(B);
  for (int t = 0; t < B; ++t) {
    Transition& tr = buf.transitions[t];
    tr.obs.resize(obs_dim);
    tr.next_obs.resize(obs_dim);
    for (double& x : tr.obs) x = 2.0 * uniform01(rng) - 1.0;
    for (double& x : tr.next_obs) x = 2.0 * uniform01(rng) - 1.0;
    tr.action = uniform_below(rng, num_actions);
    tr.r_ex = 2.0 * uniform01(rng) - 1.0;
    tr.events.resize(n_events);
    for (int& e : tr.events) e = uniform01(rng) < 0.3 ? 1 : 0;
    tr.done = uniform_below(rng, 7) == 0;
  }
  buf.transitions.back().done = true;
  return buf;
}

void stamp_behavior(RolloutBuffer& buf, const NetSpec& spec,
                    const ParamVector& policy) {
  for (Transition& tr : buf.transitions) {
    const std::vector<double> p = policy_forward(spec, policy, tr.obs);
    tr.logp_behavior = std::log(p[tr.action]);
  }
}

double surrogate_objective(const RolloutBuffer& buf,
                           const std::vector<double>& adv, const NetSpec& spec,
                           const ParamVector& policy, double clip_eps) {
  double acc = 0.0;
  for (int t = 0; t < buf.size(); ++t) {
    const Transition& tr = buf.transitions[t];
    const std::vector<double> p = policy_forward(spec, policy, tr.obs);
    const double ratio = std::exp(std::log(p[tr.action]) - tr.logp_behavior);
    const double clipped =
        std::min(std::max(ratio, 1.0 - clip_eps), 1.0 + clip_eps);
    acc += std::min(ratio * adv[t], clipped * adv[t]);
  }
  return acc / buf.size();
}

// ---- criterion 1: gradients vs central finite differences ----

Outcome criterion_gradients() {
  constexpr double kTol = 1e-4;
  double worst_logp = 0.0, worst_value = 0.0, worst_surr = 0.0;
  Rng rng = make_rng(1001);

  for (int k = 0; k < 100; ++k) {
    const int obs_dim = 2 + k % 5;
    const int actions = 2 + k % 3;
    std::vector<int> hidden;
    if (k % 3 == 1) hidden = {3 + k % 6};
    if (k % 3 == 2) hidden = {4, 3};

    const NetSpec pspec{obs_dim, hidden, actions};
    const NetSpec vspec{obs_dim, hidden, 1};
    const ParamVector theta = init_params(pspec, 5000 + k);
    const ParamVector vtheta = init_params(vspec, 6000 + k);
    // Keep the probe point away from both nets' ReLU kinks; the finite
    // difference straddles them otherwise.
    std::vector<double> obs(obs_dim);
    do {
      for (double& x : obs) x = 2.0 * uniform01(rng) - 1.0;
    } while (mbrd::testing::relu_margin(pspec, theta, obs) < 1e-4 ||
             mbrd::testing::relu_margin(vspec, vtheta, obs) < 1e-4);
    const int action = uniform_below(rng, actions);

    const LogProbGrad lp = log_prob_grad(pspec, theta, obs, action);
    const auto logp_of = [&](const std::vector<double>& v) {
      ParamVector p = theta;
      p.values = v;
      return std::log(policy_forward(pspec, p, obs)[action]);
    };
    worst_logp = std::max(
        worst_logp,
        mbrd::testing::max_rel_err(
            lp.grad, mbrd::testing::fd_gradient(logp_of, theta.values)));

    const ValueGrad vg = value_grad(vspec, vtheta, obs);
    const auto value_of = [&](const std::vector<double>& v) {
      ParamVector p = vtheta;
      p.values = v;
      return value_forward(vspec, p, obs);
    };
    worst_value = std::max(
        worst_value,
        mbrd::testing::max_rel_err(
            vg.grad, mbrd::testing::fd_gradient(value_of, vtheta.values)));
  }

  for (int k = 0; k < 100; ++k) {
    const int obs_dim = 2 + k % 3;
    const int actions = 2 + k % 2;
    const NetSpec spec{obs_dim, (k % 2 != 0) ? std::vector<int>{4}
                                             : std::vector<int>{},
                       actions};
    RolloutBuffer buf = random_buffer(rng, obs_dim, actions, 1, 12);
    const ParamVector behavior = init_params(spec, 7000 + k);
    ParamVector theta = init_params(spec, 7500 + k);
    for (std::size_t i = 0; i < theta.values.size(); ++i)
      theta.values[i] = 0.7 * behavior.values[i] + 0.3 * theta.values[i];
    for (Transition& tr : buf.transitions)
      while (mbrd::testing::relu_margin(spec, theta, tr.obs) < 1e-4)
        for (double& x : tr.obs) x = 2.0 * uniform01(rng) - 1.0;
    stamp_behavior(buf, spec, behavior);
    std::vector<double> adv(buf.size());
    for (double& a : adv) a = 2.0 * uniform01(rng) - 1.0;

    const std::vector<double> g = surrogate_gradient(buf, adv, spec, theta, 0.2);
    const auto obj = [&](const std::vector<double>& v) {
      ParamVector p = theta;
      p.values = v;
      return surrogate_objective(buf, adv, spec, p, 0.2);
    };
    worst_surr = std::max(
        worst_surr, mbrd::testing::max_rel_err(
                        g, mbrd::testing::fd_gradient(obj, theta.values)));
  }

  Outcome o;
  o.pass = worst_logp < kTol && worst_value < kTol && worst_surr < kTol;
  o.detail = "max rel err: logp " + fmt(worst_logp) + ", value " +
             fmt(worst_value) + ", surrogate " + fmt(worst_surr) +
             " (tol 1e-4, 100 instances each)";
  return o;
}

// ---- criterion 2: outer gradient vs materialized Jacobian ----

Outcome criterion_outer_oracle() {
  constexpr double kTol = 1e-10;
  double worst = 0.0;
  Rng rng = make_rng(2002);

  for (int k = 0; k < 100; ++k) {
    const int obs_dim = 2 + k % 3;
    const int actions = 2 + k % 2;
    const std::vector<int> hidden = (k % 2 != 0) ? std::vector<int>{4}
                                                 : std::vector<int>{3};
    const NetSpec spec{obs_dim, hidden, actions};
    if (spec.param_count() > 50) {
      Outcome o;
      o.detail = "internal error: policy exceeds 50 parameters";
      return o;
    }
    const int n = 1 + k % 5;
    const int B = 16 + k % 25;
    const double gamma = 0.85 + 0.1 * uniform01(rng);
    RolloutBuffer buf = random_buffer(rng, obs_dim, actions, n, B);
    const ParamVector theta = init_params(spec, 8000 + k);

    std::vector<double> w(n), w_init(n);
    for (double& x : w) x = 2.0 * uniform01(rng) - 1.0;
    for (double& x : w_init) x = 0.2 * uniform01(rng) - 0.1;
    const double beta = (k % 3 == 0) ? 0.0 : 0.4 * uniform01(rng);
    const RegMode mode = (k % 2 == 0) ? RegMode::z_norm : RegMode::weight_anchor;

    // Naive path: build every column of M explicitly.
    const std::vector<double> z_ex = motivation_ex(buf, spec, theta, gamma);
    const std::vector<double> z_in = motivation_in(buf, spec, theta, w, gamma);
    std::vector<double> ref(n, 0.0);
    for (int i = 0; i < n; ++i) {
      std::vector<double> e(n, 0.0);
      e[i] = 1.0;
      const std::vector<double> col = motivation_in(buf, spec, theta, e, gamma);
      for (std::size_t j = 0; j < col.size(); ++j) ref[i] += z_ex[j] * col[j];
      if (beta > 0.0) {
        if (mode == RegMode::weight_anchor) {
          ref[i] -= beta * 2.0 * (w[i] - w_init[i]);
        } else {
          double zn = 0.0;
          for (double x : z_in) zn += x * x;
          zn = std::sqrt(zn);
          if (zn >= 1e-12) {
            double dot = 0.0;
            for (std::size_t j = 0; j < col.size(); ++j) dot += z_in[j] * col[j];
            ref[i] -= beta * dot / zn;
          }
        }
      }
    }
    const std::vector<double> g =
        outer_grad(buf, spec, theta, w, w_init, gamma, beta, mode);
    worst = std::max(worst, mbrd::testing::max_abs_err(g, ref));
  }

  Outcome o;
  o.pass = worst < kTol;
  o.detail = "max abs err " + fmt(worst) + " (tol 1e-10, 100 instances)";
  return o;
}

// ---- criterion 3: outer direction vs one-inner-step finite difference ----

Outcome criterion_outer_direction() {
  constexpr double kAlpha = 1e-3;
  constexpr double kH = 1e-6;
  const int trials = 200;
  int positive = 0;
  std::vector<double> cosines;
  Rng rng = make_rng(3003);

  for (int k = 0; k < trials; ++k) {
    const TinyMdp m = mbrd::testing::random_mdp(rng);
    std::vector<double> theta(static_cast<std::size_t>(m.S * m.A));
    for (double& x : theta) x = 2.0 * uniform01(rng) - 1.0;
    std::vector<double> w(static_cast<std::size_t>(m.n_events));
    for (double& x : w) x = uniform01(rng) - 0.5;

    // Exact per-channel policy-gradient columns M_i and z_ex at theta.
    std::vector<std::vector<double>> cols(m.n_events);
    for (int i = 0; i < m.n_events; ++i)
      cols[i] = mbrd::testing::exact_policy_gradient(
          m, theta, mbrd::testing::event_reward(m, i));
    const std::vector<double> z_ex =
        mbrd::testing::exact_policy_gradient(m, theta, m.r_ex);

    std::vector<double> analytic(m.n_events, 0.0);
    for (int i = 0; i < m.n_events; ++i)
      for (std::size_t j = 0; j < z_ex.size(); ++j)
        analytic[i] += z_ex[j] * cols[i][j];

    // J_outer(w) = J_ex(theta + alpha * grad_theta J_in(theta, w)).
    const auto j_outer = [&](const std::vector<double>& wv) {
      std::vector<double> theta2 = theta;
      for (int i = 0; i < m.n_events; ++i)
        for (std::size_t j = 0; j < theta2.size(); ++j)
          theta2[j] += kAlpha * wv[i] * cols[i][j];
      return mbrd::testing::exact_value(
          m, mbrd::testing::policy_probs(m, theta2), m.r_ex);
    };
    const std::vector<double> fd = mbrd::testing::fd_gradient(j_outer, w, kH);

    const double c = mbrd::testing::cosine(analytic, fd);
    cosines.push_back(c);
    if (c > 0.0) ++positive;
  }

  std::sort(cosines.begin(), cosines.end());
  const double median = 0.5 * (cosines[trials / 2 - 1] + cosines[trials / 2]);
  Outcome o;
  o.pass = positive >= trials * 9 / 10 && median > 0.9;
  o.detail = "positive " + std::to_string(positive) + "/200 (need 180), median " +
             fmt(median) + " (need > 0.9)";
  return o;
}

// ---- criterion 4: shaping leaves the greedy policy unchanged ----

Outcome criterion_pbrs_invariance() {
  Rng rng = make_rng(4004);
  int identical = 0;
  const int trials = 50;
  for (int k = 0; k < trials; ++k) {
    const TinyMdp m = mbrd::testing::random_mdp(rng);
    std::vector<double> phi(static_cast<std::size_t>(m.S));
    for (double& p : phi) p = 2.0 * uniform01(rng) - 1.0;
    const std::vector<int> plain = mbrd::testing::optimal_greedy(m, m.r_ex);
    const std::vector<int> shaped = mbrd::testing::optimal_greedy(
        m, mbrd::testing::shaped_reward(m, m.r_ex, phi));
    if (plain == shaped) ++identical;
  }
  Outcome o;
  o.pass = identical == trials;
  o.detail = "identical greedy policies " + std::to_string(identical) + "/50";
  return o;
}

// ---- criterion 5: exact formulas ----

class ScriptEnv : public Env {
 public:
  explicit ScriptEnv(std::vector<double> rewards) : rewards_(std::move(rewards)) {}
  std::vector<double> reset(std::uint64_t) override {
    t_ = 0;
    return {0.0};
  }
  StepResult step(int) override {
    StepResult r;
    r.reward = rewards_[t_];
    ++t_;
    r.done = t_ >= static_cast<int>(rewards_.size());
    r.obs = {static_cast<double>(t_)};
    return r;
  }
  int obs_dim() const override { return 1; }
  int num_actions() const override { return 1; }
  int event_dim() const override { return 0; }
  std::vector<std::string> event_names() const override { return {}; }
  double potential() const override { return 0.0; }

 private:
  std::vector<double> rewards_;
  int t_ = 0;
};

Outcome criterion_formulas() {
  std::vector<std::string> failures;

  // count bonus sqrt(1/n)
  {
    EventCounts c = EventCounts::make(1);
    const std::pair<long, double> cases[] = {{1, 1.0}, {4, 0.5}, {100, 0.1}};
    for (const auto& [n, expect] : cases) {
      c.counts[0] = n;
      if (std::abs(count_bonus(c, {1}) - expect) > 1e-15)
        failures.push_back("count bonus n=" + std::to_string(n));
    }
  }

  // bucket boundaries
  {
    const BucketTable hopper = hopper_table();
    const std::pair<double, int> hop[] = {
        {-3.5, 0}, {-3, 1}, {-2, 2}, {-1, 3}, {-0.5, 4}, {0, 5},
        {0.5, 6},  {1, 7},  {1.5, 8}, {2, 9},  {3, 10},  {7.5, 10}};
    for (const auto& [r, idx] : hop)
      if (bucketize(r, hopper, 0) != idx)
        failures.push_back("hopper " + fmt(r) + "->" +
                           std::to_string(bucketize(r, hopper, 0)) +
                           " want " + std::to_string(idx));
    const BucketTable swim = swimmer_table();
    const std::pair<double, int> fwd[] = {
        {-0.1, 0}, {0, 1}, {0.5, 2}, {1, 3}, {2, 4}, {9, 4}};
    for (const auto& [r, idx] : fwd)
      if (bucketize(r, swim, 0) != idx)
        failures.push_back("swimmer fwd " + fmt(r));
    const std::pair<double, int> ctl[] = {
        {-3, 5}, {-2, 5}, {-1.5, 6}, {-1, 6}, {-0.5, 7}, {0, 7}};
    for (const auto& [r, idx] : ctl)
      if (bucketize(r, swim, 1) != idx)
        failures.push_back("swimmer ctl " + fmt(r));
  }

  // delay conservation across random episodes; eighth-valued rewards keep
  // every partial sum exact in binary floating point
  {
    Rng rng = make_rng(5005);
    for (int k : {0, 1, 10}) {
      for (int ep = 0; ep < 1000; ++ep) {
        const int T = 1 + uniform_below(rng, 60);
        std::vector<double> rewards(T);
        double raw_sum = 0.0;
        for (double& r : rewards) {
          r = (uniform_below(rng, 33) - 16) / 8.0;
          raw_sum += r;
        }
        DelayWrapper env(std::make_unique<ScriptEnv>(rewards), k);
        env.reset(0);
        double delayed_sum = 0.0;
        for (int t = 0; t < T; ++t) delayed_sum += env.step(0).reward;
        if (delayed_sum != raw_sum) {
          failures.push_back("delay k=" + std::to_string(k) + " ep=" +
                             std::to_string(ep));
          break;
        }
      }
    }
  }

  Outcome o;
  o.pass = failures.empty();
  o.detail = failures.empty()
                 ? "count bonus, 24 bucket boundaries, delay sums k in {0,1,10} x 1000 episodes"
                 : "first failure: " + failures.front() + " (" +
                       std::to_string(failures.size()) + " total)";
  return o;
}

// ---- criteria 6-9: desk-scale training ----

struct DeskRuns {
  std::vector<RunRecord> mbrd;
  std::vector<RunRecord> ppo;
  double seconds = 0.0;
};

DeskRuns desk_runs(const std::string& domain, bool with_ppo, double beta_override,
                   bool use_beta_override) {
  std::vector<RunConfig> cfgs;
  for (int variant = 0; variant < (with_ppo ? 2 : 1); ++variant)
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      RunConfig cfg = RunConfig::defaults_for(domain);
      cfg.apply_scale("desk");
      cfg.method = variant == 0 ? Method::mbrd : Method::ppo;
      if (use_beta_override) cfg.beta = beta_override;
      cfg.seed = seed;
      cfgs.push_back(cfg);
    }
  const auto t0 = Clock::now();
  std::vector<RunRecord> records = run_pool(cfgs, pool_jobs());
  DeskRuns out;
  out.seconds = seconds_since(t0);
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].config.method == Method::mbrd)
      out.mbrd.push_back(std::move(records[i]));
    else
      out.ppo.push_back(std::move(records[i]));
  }
  return out;
}

double mean_final(const std::vector<RunRecord>& recs) {
  double m = 0.0;
  for (const RunRecord& r : recs) m += r.final_mean_return();
  return m / static_cast<double>(recs.size());
}

int count_sign(const std::vector<RunRecord>& recs, std::size_t idx, int sign) {
  int n = 0;
  for (const RunRecord& r : recs) {
    if (r.final_w.size() <= idx) continue;
    if (sign > 0 && r.final_w[idx] > 0.0) ++n;
    if (sign < 0 && r.final_w[idx] < 0.0) ++n;
  }
  return n;
}

std::string weights_summary(const std::vector<RunRecord>& recs, std::size_t idx) {
  std::string s;
  for (const RunRecord& r : recs) {
    if (!s.empty()) s += " ";
    s += r.final_w.size() > idx ? fmt(r.final_w[idx]) : std::string("-");
  }
  return s;
}

// Criteria 6 and 7 share one batch of Foraging runs.
const DeskRuns& foraging_runs() {
  static DeskRuns runs = desk_runs("foraging", true, 0.0, false);
  return runs;
}

Outcome criterion_foraging_signs() {
  const DeskRuns& runs = foraging_runs();
  constexpr double kBudget = 1200.0;
  int good = 0;
  for (const RunRecord& r : runs.mbrd)
    if (r.final_w.size() == 2 && r.final_w[0] > 0.0 && r.final_w[1] < 0.0)
      ++good;
  Outcome o;
  o.pass = good >= 4 && runs.seconds < kBudget;
  o.detail = "w_apple>0 and w_poison<0 in " + std::to_string(good) +
             "/5 seeds (need 4); w_apple: " + weights_summary(runs.mbrd, 0) +
             "; w_poison: " + weights_summary(runs.mbrd, 1) + "; runs " +
             fmt(runs.seconds) + "s (budget 1200s)";
  return o;
}

Outcome criterion_delayed_advantage() {
  const DeskRuns& runs = foraging_runs();
  constexpr double kBudget = 1200.0;
  const double m = mean_final(runs.mbrd);
  const double p = mean_final(runs.ppo);
  Outcome o;
  o.pass = m >= p && runs.seconds < kBudget;
  o.detail = "mean final return: mbrd " + fmt(m) + " vs ppo " + fmt(p) +
             " (shared runs, " + fmt(runs.seconds) + "s)";
  return o;
}

Outcome criterion_hungry_thirsty() {
  constexpr double kBudget = 2400.0;
  const DeskRuns with_beta = desk_runs("hungry_thirsty", false, 0.0, false);
  const DeskRuns no_beta = desk_runs("hungry_thirsty", false, 0.0, true);
  const double total = with_beta.seconds + no_beta.seconds;
  const int drink_default = count_sign(with_beta.mbrd, 1, +1);
  const int drink_zero = count_sign(no_beta.mbrd, 1, +1);
  Outcome o;
  o.pass = drink_default >= 4 && drink_zero <= drink_default && total < kBudget;
  o.detail = "w_drink>0: default beta " + std::to_string(drink_default) +
             "/5 (need 4), beta=0 " + std::to_string(drink_zero) +
             "/5 (must not exceed); w_drink: " +
             weights_summary(with_beta.mbrd, 1) + "; " + fmt(total) +
             "s (budget 2400s)";
  return o;
}

Outcome criterion_fight_monster() {
  constexpr double kBudget = 1200.0;
  const DeskRuns runs = desk_runs("fight_monster", true, 0.0, false);
  const int buff = count_sign(runs.mbrd, 0, +1);
  const double m = mean_final(runs.mbrd);
  const double p = mean_final(runs.ppo);
  Outcome o;
  o.pass = buff >= 4 && m >= p && runs.seconds < kBudget;
  o.detail = "w_buff>0 in " + std::to_string(buff) +
             "/5 (need 4); mean final: mbrd " + fmt(m) + " vs ppo " + fmt(p) +
             "; w_buff: " + weights_summary(runs.mbrd, 0) + "; " +
             fmt(runs.seconds) + "s (budget 1200s)";
  return o;
}

// ---- criterion 10: byte-identical reruns ----

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

Outcome criterion_determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() /
                        ("mbrd_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(root);

  RunConfig cfg = RunConfig::defaults_for("foraging");
  cfg.method = Method::mbrd;
  cfg.total_steps = 10240;
  cfg.seed = 0;
  RunConfig a = cfg, b = cfg;
  a.out_dir = (root / "a").string();
  b.out_dir = (root / "b").string();
  run(a);
  run(b);

  bool same = true;
  std::string first_diff;
  for (const char* f : {"record.csv", "updates.csv", "weights.csv"}) {
    const std::string fa = slurp(a.out_dir + "/" + f);
    const std::string fb = slurp(b.out_dir + "/" + f);
    if (fa.empty() || fa != fb) {
      same = false;
      if (first_diff.empty()) first_diff = f;
    }
  }
  fs::remove_all(root);

  Outcome o;
  o.pass = same;
  o.detail = same ? "record.csv, updates.csv, weights.csv byte-identical across reruns"
                  : "differs: " + first_diff;
  return o;
}

struct Criterion {
  int number;
  const char* name;
  std::function<Outcome()> fn;
  double budget_seconds;  // <= 0: no explicit budget
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  const std::vector<Criterion> criteria = {
      {1, "gradient correctness", criterion_gradients, 60.0},
      {2, "outer-gradient oracle equivalence", criterion_outer_oracle, 60.0},
      {3, "outer direction vs one-step finite difference",
       criterion_outer_direction, 300.0},
      {4, "shaping policy invariance", criterion_pbrs_invariance, 60.0},
      {5, "exact formula checks", criterion_formulas, 60.0},
      {6, "foraging weight signs", criterion_foraging_signs, 1200.0},
      {7, "delayed-reward advantage over ppo", criterion_delayed_advantage,
       1200.0},
      {8, "hungry-thirsty drink weight and beta ablation",
       criterion_hungry_thirsty, 2400.0},
      {9, "fight-monster buff weight and return", criterion_fight_monster,
       1200.0},
      {10, "byte-identical reruns", criterion_determinism, 0.0},
  };

  int failures = 0;
  const auto t_all = Clock::now();
  for (const Criterion& c : criteria) {
    if (!selected.empty() && selected.count(c.number) == 0) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double dt = seconds_since(t0);
    if (c.budget_seconds > 0.0 && dt > c.budget_seconds) o.pass = false;
    if (!o.pass) ++failures;
    std::printf("[%s] %2d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", c.number,
                c.name, o.detail.c_str(), dt);
    std::fflush(stdout);
  }
  std::printf("acceptance total: %.1fs, %d failure%s\n", seconds_since(t_all),
              failures, failures == 1 ? "" : "s");
  return failures == 0 ? 0 : 1;
}
