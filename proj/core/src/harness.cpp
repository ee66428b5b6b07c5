#include "mbrd/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mbrd/rollout.hpp"

namespace mbrd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? kNaN : s / static_cast<double>(xs.size());
}

double std_of(const std::vector<double>& xs, double mean) {
  if (xs.empty()) return kNaN;
  double v = 0.0;
  for (double x : xs) v += (x - mean) * (x - mean);
  return std::sqrt(v / static_cast<double>(xs.size()));
}

long parse_long(const std::string& s) {
  std::size_t pos = 0;
  const long v = std::stol(s, &pos);
  if (pos != s.size()) throw std::runtime_error("bad integer: " + s);
  return v;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::runtime_error("bad number: " + s);
  return v;
}

std::vector<int> parse_hidden(const std::string& s) {
  std::vector<int> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(static_cast<int>(parse_long(cur)));
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

std::string hidden_str(const std::vector<int>& h) {
  std::string s;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i > 0) s += ',';
    s += std::to_string(h[i]);
  }
  return s;
}

}  // namespace

Method parse_method(const std::string& s) {
  if (s == "mbrd") return Method::mbrd;
  if (s == "ppo") return Method::ppo;
  if (s == "cb") return Method::cb;
  if (s == "pbrs") return Method::pbrs;
  throw std::invalid_argument("unknown method: " + s);
}

std::string method_name(Method m) {
  switch (m) {
    case Method::mbrd: return "mbrd";
    case Method::ppo: return "ppo";
    case Method::cb: return "cb";
    case Method::pbrs: return "pbrs";
  }
  return "?";
}

std::vector<Method> all_methods() {
  return {Method::mbrd, Method::ppo, Method::cb, Method::pbrs};
}

RunConfig RunConfig::defaults_for(const std::string& domain) {
  const std::vector<std::string> ids = domain_ids();
  if (std::find(ids.begin(), ids.end(), domain) == ids.end())
    throw std::invalid_argument("unknown domain: " + domain);

  RunConfig c;
  c.domain = domain;
  if (domain.rfind("synth_", 0) == 0) {
    c.total_steps = 3'000'000;
    c.update_period = 20000;
    c.eval_period = 20000;
    c.max_episode_len = 1000;
    c.gamma = 0.99;
    c.beta = 1e-3;
    c.policy_hidden = {64, 64};
    c.value_hidden = {64, 64};
    c.ppo.epochs = 5;
  } else {
    c.total_steps = domain == "hungry_thirsty" ? 4'000'000 : 2'000'000;
    c.update_period = 1024;
    c.eval_period = 10240;
    c.max_episode_len = 200;
    c.gamma = 0.999;
    c.beta = domain == "hungry_thirsty" ? 1e-2 : 1e-3;
    c.policy_hidden = {8, 8};
    c.value_hidden = {32, 32};
    c.ppo.epochs = 50;
  }
  return c;
}

void RunConfig::apply_scale(const std::string& scale) {
  if (scale == "paper") return;
  if (scale == "desk") {
    total_steps /= 4;
    return;
  }
  throw std::invalid_argument("unknown scale: " + scale);
}

KvPairs RunConfig::to_kv() const {
  KvPairs kv;
  kv.emplace_back("domain", domain);
  kv.emplace_back("method", method_name(method));
  kv.emplace_back("seed", std::to_string(seed));
  kv.emplace_back("total_steps", std::to_string(total_steps));
  kv.emplace_back("update_period", std::to_string(update_period));
  kv.emplace_back("eval_period", std::to_string(eval_period));
  kv.emplace_back("eval_episodes", std::to_string(eval_episodes));
  kv.emplace_back("max_episode_len", std::to_string(max_episode_len));
  kv.emplace_back("gamma", fmt_double(gamma));
  kv.emplace_back("beta", fmt_double(beta));
  kv.emplace_back("reg_mode", reg_mode_name(reg_mode));
  kv.emplace_back("outer_lr", fmt_double(outer_lr));
  kv.emplace_back("w_init", fmt_double(w_init_value));
  kv.emplace_back("policy_hidden", hidden_str(policy_hidden));
  kv.emplace_back("value_hidden", hidden_str(value_hidden));
  kv.emplace_back("epochs", std::to_string(ppo.epochs));
  kv.emplace_back("minibatch", std::to_string(ppo.minibatch));
  kv.emplace_back("lr_policy", fmt_double(ppo.lr_policy));
  kv.emplace_back("lr_value", fmt_double(ppo.lr_value));
  kv.emplace_back("clip_eps", fmt_double(ppo.clip_eps));
  kv.emplace_back("gae_lambda", fmt_double(ppo.gae_lambda));
  kv.emplace_back("value_coef", fmt_double(ppo.value_coef));
  kv.emplace_back("entropy_coef", fmt_double(ppo.entropy_coef));
  kv.emplace_back("normalize_adv", ppo.normalize_adv ? "1" : "0");
  kv.emplace_back("delay_steps", std::to_string(env.delay_steps));
  kv.emplace_back("thirst_period", std::to_string(env.thirst_period));
  kv.emplace_back("fm_draw_reward", fmt_double(env.fm_draw_reward));
  kv.emplace_back("fm_step_cost", fmt_double(env.fm_step_cost));
  return kv;
}

RunConfig RunConfig::from_kv(const KvPairs& kv) {
  RunConfig c = defaults_for(kv_get(kv, "domain", "foraging"));
  for (const auto& [k, v] : kv) {
    if (k == "domain") continue;
    if (k == "method") c.method = parse_method(v);
    else if (k == "seed") c.seed = static_cast<std::uint64_t>(parse_long(v));
    else if (k == "total_steps") c.total_steps = parse_long(v);
    else if (k == "update_period") c.update_period = static_cast<int>(parse_long(v));
    else if (k == "eval_period") c.eval_period = static_cast<int>(parse_long(v));
    else if (k == "eval_episodes") c.eval_episodes = static_cast<int>(parse_long(v));
    else if (k == "max_episode_len") c.max_episode_len = static_cast<int>(parse_long(v));
    else if (k == "gamma") c.gamma = parse_double(v);
    else if (k == "beta") c.beta = parse_double(v);
    else if (k == "reg_mode") c.reg_mode = parse_reg_mode(v);
    else if (k == "outer_lr") c.outer_lr = parse_double(v);
    else if (k == "w_init") c.w_init_value = parse_double(v);
    else if (k == "policy_hidden") c.policy_hidden = parse_hidden(v);
    else if (k == "value_hidden") c.value_hidden = parse_hidden(v);
    else if (k == "epochs") c.ppo.epochs = static_cast<int>(parse_long(v));
    else if (k == "minibatch") c.ppo.minibatch = static_cast<int>(parse_long(v));
    else if (k == "lr_policy") c.ppo.lr_policy = parse_double(v);
    else if (k == "lr_value") c.ppo.lr_value = parse_double(v);
    else if (k == "clip_eps") c.ppo.clip_eps = parse_double(v);
    else if (k == "gae_lambda") c.ppo.gae_lambda = parse_double(v);
    else if (k == "value_coef") c.ppo.value_coef = parse_double(v);
    else if (k == "entropy_coef") c.ppo.entropy_coef = parse_double(v);
    else if (k == "normalize_adv") c.ppo.normalize_adv = parse_long(v) != 0;
    else if (k == "delay_steps") c.env.delay_steps = static_cast<int>(parse_long(v));
    else if (k == "thirst_period") c.env.thirst_period = static_cast<int>(parse_long(v));
    else if (k == "fm_draw_reward") c.env.fm_draw_reward = parse_double(v);
    else if (k == "fm_step_cost") c.env.fm_step_cost = parse_double(v);
    else throw std::runtime_error("unknown config key: " + k);
  }
  return c;
}

double RunRecord::final_mean_return() const {
  return evals.empty() ? kNaN : evals.back().mean_return;
}

RunRecord run(const RunConfig& cfg_in) {
  RunConfig cfg = cfg_in;
  cfg.ppo.gamma = cfg.gamma;
  if (cfg.total_steps < 1 || cfg.update_period < 1 || cfg.eval_period < 1 ||
      cfg.eval_episodes < 1)
    throw std::invalid_argument("run: non-positive step counts");

  EnvOptions eopt = cfg.env;
  eopt.max_episode_len = cfg.max_episode_len;
  std::unique_ptr<Env> train_env = make_env(cfg.domain, eopt);
  std::unique_ptr<Env> eval_env = make_env(cfg.domain, eopt);

  Agent agent =
      Agent::make(train_env->obs_dim(), train_env->num_actions(),
                  cfg.policy_hidden, cfg.value_hidden, cfg.ppo.lr_policy,
                  cfg.ppo.lr_value, cfg.seed);

  const int n_events = train_env->event_dim();
  IntrinsicWeights weights;
  if (cfg.method == Method::mbrd) {
    if (n_events < 1)
      throw std::invalid_argument("run: mbrd needs event channels");
    weights = IntrinsicWeights::make(n_events, cfg.w_init_value, cfg.outer_lr);
  }
  EventCounts counts;
  if (cfg.method == Method::cb) counts = EventCounts::make(n_events);

  RolloutCollector collector(*train_env, cfg.seed);
  Rng update_rng = make_rng(cfg.seed, 20);
  const std::uint64_t eval_seed = split_seed(cfg.seed, 500);

  RunRecord rec;
  rec.config = cfg;

  std::unique_ptr<CsvWriter> record_csv;
  std::unique_ptr<CsvWriter> updates_csv;
  std::unique_ptr<CsvWriter> weights_csv;
  if (!cfg.out_dir.empty()) {
    ensure_dir(cfg.out_dir);
    write_kv(cfg.out_dir + "/config.txt", cfg.to_kv());
    std::vector<std::string> rhdr = {"step", "mean_return", "std_return"};
    if (cfg.method == Method::mbrd) {
      for (int i = 0; i < n_events; ++i)
        rhdr.push_back("w_" + std::to_string(i));
      rhdr.push_back("cosine");
    }
    record_csv = std::make_unique<CsvWriter>(cfg.out_dir + "/record.csv", rhdr);
    updates_csv = std::make_unique<CsvWriter>(
        cfg.out_dir + "/updates.csv",
        std::vector<std::string>{"update", "step", "policy_loss", "value_loss",
                                 "entropy", "clip_fraction", "approx_kl",
                                 "train_return"});
    if (cfg.method == Method::mbrd) {
      std::vector<std::string> whdr = {"update"};
      for (int i = 0; i < n_events; ++i)
        whdr.push_back("w_" + std::to_string(i));
      whdr.push_back("cosine");
      whdr.push_back("z_ex_norm");
      whdr.push_back("z_in_norm");
      weights_csv =
          std::make_unique<CsvWriter>(cfg.out_dir + "/weights.csv", whdr);
    }
  }

  double last_cosine = 0.0;
  const auto do_eval = [&](long step) {
    const std::vector<double> rets =
        evaluate_policy(*eval_env, agent.policy_spec, agent.policy,
                        cfg.eval_episodes, eval_seed);
    EvalPoint p;
    p.step = step;
    p.mean_return = mean_of(rets);
    p.std_return = std_of(rets, p.mean_return);
    rec.evals.push_back(p);
    if (record_csv) {
      std::vector<double> row = {static_cast<double>(step), p.mean_return,
                                 p.std_return};
      if (cfg.method == Method::mbrd) {
        row.insert(row.end(), weights.w.begin(), weights.w.end());
        row.push_back(last_cosine);
      }
      record_csv->row(row);
    }
  };

  long steps_done = 0;
  long next_eval = 0;
  long update_idx = 1;
  double ep_accum = 0.0;
  bool warned_no_episode = false;

  try {
    while (steps_done < cfg.total_steps) {
      if (steps_done >= next_eval) {
        do_eval(steps_done);
        next_eval += cfg.eval_period;
      }
      const int todo = static_cast<int>(
          std::min<long>(cfg.update_period, cfg.total_steps - steps_done));
      RolloutBuffer buf =
          collector.collect(agent.policy_spec, agent.policy, todo);

      // Outer statistics must see the behavior policy, so compute them
      // before the inner update moves theta.
      OuterStats stats;
      if (cfg.method == Method::mbrd)
        stats = outer_stats(buf, agent.policy_spec, agent.policy, weights,
                            cfg.gamma, cfg.beta, cfg.reg_mode);

      RewardSpec src;
      switch (cfg.method) {
        case Method::ppo:
          src.kind = RewardSourceKind::extrinsic;
          break;
        case Method::mbrd:
          src.kind = RewardSourceKind::intrinsic;
          src.w = &weights.w;
          break;
        case Method::cb:
          src.kind = RewardSourceKind::extrinsic_cb;
          src.counts = &counts;
          break;
        case Method::pbrs:
          src.kind = RewardSourceKind::extrinsic_pbrs;
          src.gamma = cfg.gamma;
          break;
      }
      const PpoDiagnostics diag = ppo_update(buf, src, agent, cfg.ppo, update_rng);

      if (cfg.method == Method::mbrd) {
        if (!outer_update(weights, stats.grad)) {
          ++rec.outer_skips;
          std::fprintf(stderr,
                       "warning: non-finite outer gradient at update %ld, "
                       "skipped\n",
                       update_idx);
        }
        last_cosine = stats.cosine;
      }

      double ep_sum = 0.0;
      int ep_count = 0;
      for (const Transition& tr : buf.transitions) {
        ep_accum += tr.r_ex;
        if (tr.done) {
          ep_sum += ep_accum;
          ++ep_count;
          ep_accum = 0.0;
        }
      }
      const double train_ret = ep_count > 0 ? ep_sum / ep_count : kNaN;
      if (ep_count == 0 && !warned_no_episode) {
        std::fprintf(stderr,
                     "warning: no episode finished within update %ld; "
                     "train_return recorded as nan\n",
                     update_idx);
        warned_no_episode = true;
      }

      steps_done += todo;

      UpdatePoint up;
      up.update = update_idx;
      up.step = steps_done;
      up.diag = diag;
      up.train_return = train_ret;
      if (cfg.method == Method::mbrd) {
        up.w = weights.w;
        up.cosine = stats.cosine;
        up.z_ex_norm = stats.z_ex_norm;
        up.z_in_norm = stats.z_in_norm;
      }
      rec.updates.push_back(up);

      if (updates_csv)
        updates_csv->row({static_cast<double>(up.update),
                          static_cast<double>(up.step), diag.policy_loss,
                          diag.value_loss, diag.entropy, diag.clip_fraction,
                          diag.approx_kl, train_ret});
      if (weights_csv) {
        std::vector<double> row = {static_cast<double>(up.update)};
        row.insert(row.end(), weights.w.begin(), weights.w.end());
        row.push_back(up.cosine);
        row.push_back(up.z_ex_norm);
        row.push_back(up.z_in_norm);
        weights_csv->row(row);
      }
      ++update_idx;
    }
    do_eval(steps_done);
  } catch (const NumericalError& e) {
    rec.aborted = true;
    rec.abort_reason = e.what();
    const std::string marker = std::string("# aborted: ") + e.what();
    if (record_csv) record_csv->raw_line(marker);
    if (updates_csv) updates_csv->raw_line(marker);
    if (weights_csv) weights_csv->raw_line(marker);
    std::fprintf(stderr, "error: run aborted: %s\n", e.what());
  }

  if (cfg.method == Method::mbrd) rec.final_w = weights.w;
  if (!cfg.out_dir.empty()) save_agent(cfg.out_dir, agent);
  return rec;
}

std::vector<RunRecord> run_pool(const std::vector<RunConfig>& cfgs, int jobs) {
  if (jobs < 1) jobs = 1;
  std::vector<RunRecord> out(cfgs.size());
  std::vector<std::exception_ptr> errs(cfgs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cfgs.size()) return;
      try {
        out[i] = run(cfgs[i]);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  const std::size_t nthreads =
      std::min<std::size_t>(static_cast<std::size_t>(jobs), cfgs.size());
  std::vector<std::thread> threads;
  threads.reserve(nthreads);
  for (std::size_t i = 0; i < nthreads; ++i) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();
  for (const std::exception_ptr& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

std::vector<CurvePoint> aggregate(const std::vector<RunRecord>& records,
                                  bool* truncated) {
  if (truncated) *truncated = false;
  if (records.empty()) return {};
  std::size_t n = records.front().evals.size();
  for (const RunRecord& r : records) {
    if (r.evals.size() != n) {
      n = std::min(n, r.evals.size());
      if (truncated) *truncated = true;
    }
  }
  if (truncated && *truncated)
    std::fprintf(stderr,
                 "warning: records of unequal length; truncating to %zu "
                 "eval points\n",
                 n);
  std::vector<CurvePoint> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> vals;
    vals.reserve(records.size());
    for (const RunRecord& r : records) vals.push_back(r.evals[i].mean_return);
    CurvePoint p;
    p.step = records.front().evals[i].step;
    p.count = static_cast<int>(records.size());
    p.mean = mean_of(vals);
    p.stddev = std_of(vals, p.mean);
    out.push_back(p);
  }
  return out;
}

std::string run_dir(const std::string& out_root, const std::string& domain,
                    const std::string& method_tag, std::uint64_t seed) {
  return out_root + "/" + domain + "/" + method_tag + "/" +
         std::to_string(seed);
}

SweepResult sweep_beta(const RunConfig& base, const std::string& out_root,
                       const std::vector<double>& betas,
                       const std::vector<std::uint64_t>& seeds, int jobs) {
  if (betas.empty()) throw std::invalid_argument("sweep_beta: empty beta list");
  if (seeds.empty()) throw std::invalid_argument("sweep_beta: empty seed list");
  std::vector<RunConfig> cfgs;
  for (double b : betas)
    for (std::uint64_t s : seeds) {
      RunConfig c = base;
      c.beta = b;
      c.seed = s;
      c.out_dir = run_dir(out_root, c.domain,
                          method_name(c.method) + "-beta" + fmt_double(b), s);
      cfgs.push_back(c);
    }
  SweepResult res;
  res.records = run_pool(cfgs, jobs);

  ensure_dir(out_root);
  res.summary_path = out_root + "/sweep_beta.csv";
  CsvWriter w(res.summary_path,
              {"beta", "seeds", "mean_final_return", "std_final_return"});
  std::size_t idx = 0;
  for (double b : betas) {
    std::vector<double> finals;
    for (std::size_t s = 0; s < seeds.size(); ++s)
      finals.push_back(res.records[idx++].final_mean_return());
    const double m = mean_of(finals);
    w.row({b, static_cast<double>(finals.size()), m, std_of(finals, m)});
  }
  return res;
}

SweepResult sweep_episode_length(const RunConfig& base,
                                 const std::string& out_root,
                                 const std::vector<int>& lengths,
                                 const std::vector<std::uint64_t>& seeds,
                                 int jobs) {
  if (lengths.empty())
    throw std::invalid_argument("sweep_episode_length: empty length list");
  if (seeds.empty())
    throw std::invalid_argument("sweep_episode_length: empty seed list");
  const std::vector<Method> methods = {Method::mbrd, Method::ppo};
  std::vector<RunConfig> cfgs;
  for (Method m : methods)
    for (int len : lengths)
      for (std::uint64_t s : seeds) {
        RunConfig c = base;
        c.domain = "foraging";
        c.method = m;
        c.max_episode_len = len;
        c.seed = s;
        c.out_dir =
            run_dir(out_root, c.domain,
                    method_name(m) + "-len" + std::to_string(len), s);
        cfgs.push_back(c);
      }
  SweepResult res;
  res.records = run_pool(cfgs, jobs);

  ensure_dir(out_root);
  res.summary_path = out_root + "/sweep_eplen.csv";
  CsvWriter w(res.summary_path, {"method", "length", "seeds",
                                 "mean_final_return", "std_final_return"});
  std::size_t idx = 0;
  for (Method m : methods)
    for (int len : lengths) {
      std::vector<double> finals;
      for (std::size_t s = 0; s < seeds.size(); ++s)
        finals.push_back(res.records[idx++].final_mean_return());
      const double mean = mean_of(finals);
      w.raw_line(join_csv({method_name(m), std::to_string(len),
                           std::to_string(finals.size()), fmt_double(mean),
                           fmt_double(std_of(finals, mean))}));
    }
  return res;
}

namespace {

std::string spec_str(const NetSpec& s) {
  std::string out = std::to_string(s.input_dim);
  for (int h : s.hidden) out += " " + std::to_string(h);
  out += " " + std::to_string(s.output_dim);
  return out;
}

NetSpec parse_spec(const std::string& s) {
  std::istringstream in(s);
  std::vector<int> dims;
  int d = 0;
  while (in >> d) dims.push_back(d);
  if (dims.size() < 2) throw std::runtime_error("bad net spec: " + s);
  NetSpec spec;
  spec.input_dim = dims.front();
  spec.output_dim = dims.back();
  spec.hidden.assign(dims.begin() + 1, dims.end() - 1);
  spec.validate();
  return spec;
}

std::string params_str(const ParamVector& p) {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    if (i > 0) out += ' ';
    std::snprintf(buf, sizeof(buf), "%.17g", p.values[i]);
    out += buf;
  }
  return out;
}

ParamVector parse_params(const NetSpec& spec, const std::string& s) {
  ParamVector p = init_params(spec, 0);  // borrow the slice layout
  std::istringstream in(s);
  for (double& v : p.values)
    if (!(in >> v)) throw std::runtime_error("truncated parameter list");
  double extra = 0.0;
  if (in >> extra) throw std::runtime_error("excess parameter values");
  return p;
}

}  // namespace

void save_agent(const std::string& dir, const Agent& agent) {
  KvPairs kv;
  kv.emplace_back("policy_spec", spec_str(agent.policy_spec));
  kv.emplace_back("value_spec", spec_str(agent.value_spec));
  kv.emplace_back("policy", params_str(agent.policy));
  kv.emplace_back("value", params_str(agent.value));
  write_kv(dir + "/agent.txt", kv);
}

Agent load_agent(const std::string& dir) {
  const KvPairs kv = read_kv(dir + "/agent.txt");
  Agent a;
  a.policy_spec = parse_spec(kv_get(kv, "policy_spec", ""));
  a.value_spec = parse_spec(kv_get(kv, "value_spec", ""));
  a.policy = parse_params(a.policy_spec, kv_get(kv, "policy", ""));
  a.value = parse_params(a.value_spec, kv_get(kv, "value", ""));
  a.policy_opt = OptimizerState::make(a.policy.size(), 3e-4);
  a.value_opt = OptimizerState::make(a.value.size(), 1e-3);
  return a;
}

}  // namespace mbrd
