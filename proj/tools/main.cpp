#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mbrd/harness.hpp"
#include "mbrd/rollout.hpp"
#include "plot.hpp"

namespace fs = std::filesystem;

namespace {

using namespace mbrd;

std::string default_out_root() {
  const char* env = std::getenv("MBRD_OUT_ROOT");
  return env != nullptr && *env != '\0' ? env : "out";
}

std::vector<std::uint64_t> seed_list(int n) {
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < n; ++i) seeds.push_back(static_cast<std::uint64_t>(i));
  return seeds;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

// Sorted recursive listing of files with the given name, for deterministic
// plot and summary ordering.
std::vector<fs::path> find_named(const fs::path& root, const std::string& name) {
  std::vector<fs::path> out;
  if (!fs::exists(root)) return out;
  for (const auto& entry : fs::recursive_directory_iterator(root))
    if (entry.is_regular_file() && entry.path().filename() == name)
      out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

int report_runs(const std::vector<RunRecord>& records) {
  int aborted = 0;
  for (const RunRecord& r : records) {
    std::printf("%s %s seed=%llu final_return=%s%s\n", r.config.domain.c_str(),
                method_name(r.config.method).c_str(),
                static_cast<unsigned long long>(r.config.seed),
                fmt_double(r.final_mean_return()).c_str(),
                r.aborted ? " [aborted]" : "");
    if (r.aborted) ++aborted;
  }
  return aborted;
}

// ---- train ----

struct TrainOpts {
  std::string domain = "foraging";
  std::string method = "mbrd";
  std::string config_path;
  std::string scale = "paper";
  std::string out_root = default_out_root();
  std::uint64_t seed = 0;
  long steps = 0;
  double beta = 0.0;
  std::string reg_mode;
  double gamma = 0.0;
  int max_ep_len = 0;
  int delay = 0;

  CLI::Option* steps_opt = nullptr;
  CLI::Option* beta_opt = nullptr;
  CLI::Option* gamma_opt = nullptr;
  CLI::Option* eplen_opt = nullptr;
  CLI::Option* delay_opt = nullptr;
  CLI::Option* domain_opt = nullptr;
  CLI::Option* method_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
};

int cmd_train(const TrainOpts& o) {
  KvPairs kv;
  if (!o.config_path.empty()) kv = read_kv(o.config_path);
  if (*o.domain_opt || kv_get(kv, "domain", "").empty())
    kv.emplace_back("domain", o.domain);
  if (*o.method_opt || kv_get(kv, "method", "").empty())
    kv.emplace_back("method", o.method);
  if (*o.seed_opt || kv_get(kv, "seed", "").empty())
    kv.emplace_back("seed", std::to_string(o.seed));
  if (*o.beta_opt) kv.emplace_back("beta", fmt_double(o.beta));
  if (!o.reg_mode.empty()) kv.emplace_back("reg_mode", o.reg_mode);
  if (*o.gamma_opt) kv.emplace_back("gamma", fmt_double(o.gamma));
  if (*o.eplen_opt) kv.emplace_back("max_episode_len", std::to_string(o.max_ep_len));
  if (*o.delay_opt) kv.emplace_back("delay_steps", std::to_string(o.delay));

  RunConfig cfg = RunConfig::from_kv(kv);
  cfg.apply_scale(o.scale);
  if (*o.steps_opt) cfg.total_steps = o.steps;
  cfg.out_dir = run_dir(o.out_root, cfg.domain, method_name(cfg.method), cfg.seed);

  const RunRecord rec = run(cfg);
  std::printf("run dir: %s\n", cfg.out_dir.c_str());
  std::printf("final_return=%s evals=%zu updates=%zu outer_skips=%d\n",
              fmt_double(rec.final_mean_return()).c_str(), rec.evals.size(),
              rec.updates.size(), rec.outer_skips);
  if (rec.aborted) {
    std::fprintf(stderr, "run aborted: %s\n", rec.abort_reason.c_str());
    return 1;
  }
  return 0;
}

// ---- grid ----

int cmd_grid(const std::string& domains_csv, int nseeds,
             const std::string& scale, long steps, bool steps_set,
             const std::string& out_root, int jobs) {
  std::vector<RunConfig> cfgs;
  for (const std::string& d : split_list(domains_csv))
    for (Method m : all_methods())
      for (std::uint64_t s : seed_list(nseeds)) {
        RunConfig c = RunConfig::defaults_for(d);
        c.apply_scale(scale);
        if (steps_set) c.total_steps = steps;
        c.method = m;
        c.seed = s;
        c.out_dir = run_dir(out_root, d, method_name(m), s);
        cfgs.push_back(c);
      }
  const std::vector<RunRecord> records = run_pool(cfgs, jobs);

  ensure_dir(out_root);
  CsvWriter summary(out_root + "/grid_summary.csv",
                    {"domain", "method", "seeds", "mean_final_return",
                     "std_final_return"});
  std::size_t idx = 0;
  for (const std::string& d : split_list(domains_csv))
    for (Method m : all_methods()) {
      std::vector<double> finals;
      for (int s = 0; s < nseeds; ++s)
        finals.push_back(records[idx++].final_mean_return());
      double mean = 0.0;
      for (double f : finals) mean += f;
      mean /= static_cast<double>(finals.size());
      double var = 0.0;
      for (double f : finals) var += (f - mean) * (f - mean);
      summary.raw_line(join_csv(
          {d, method_name(m), std::to_string(finals.size()), fmt_double(mean),
           fmt_double(std::sqrt(var / static_cast<double>(finals.size())))}));
    }
  std::printf("summary: %s\n", summary.path().c_str());
  return report_runs(records) == 0 ? 0 : 1;
}

// ---- plot ----

struct MeanCurve {
  std::vector<double> x, mean, sd;
};

bool curve_from_records(const std::vector<fs::path>& files, MeanCurve& out) {
  std::vector<CsvTable> tabs;
  for (const fs::path& f : files) {
    try {
      CsvTable t = read_csv(f.string());
      if (t.column("step") < 0 || t.column("mean_return") < 0)
        throw std::runtime_error("missing step/mean_return column");
      tabs.push_back(std::move(t));
    } catch (const std::exception& e) {
      std::fprintf(stderr, "warning: skipping %s: %s\n", f.string().c_str(),
                   e.what());
    }
  }
  if (tabs.empty()) return false;
  std::size_t n = tabs.front().rows.size();
  for (const CsvTable& t : tabs) n = std::min(n, t.rows.size());
  const int xc = tabs.front().column("step");
  for (std::size_t i = 0; i < n; ++i) {
    out.x.push_back(tabs.front().rows[i][static_cast<std::size_t>(xc)]);
    double mean = 0.0;
    for (const CsvTable& t : tabs)
      mean += t.rows[i][static_cast<std::size_t>(t.column("mean_return"))];
    mean /= static_cast<double>(tabs.size());
    double var = 0.0;
    for (const CsvTable& t : tabs) {
      const double v =
          t.rows[i][static_cast<std::size_t>(t.column("mean_return"))];
      var += (v - mean) * (v - mean);
    }
    out.mean.push_back(mean);
    out.sd.push_back(std::sqrt(var / static_cast<double>(tabs.size())));
  }
  return !out.x.empty();
}

bool write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::trunc | std::ios::binary);
  if (!f) return false;
  f << content;
  return static_cast<bool>(f);
}

int cmd_plot(const std::string& input, const std::string& out_arg) {
  const fs::path root(input);
  const fs::path out_dir = out_arg.empty() ? root : fs::path(out_arg);
  if (!fs::exists(root)) {
    std::fprintf(stderr, "error: no such directory: %s\n", input.c_str());
    return 1;
  }
  ensure_dir(out_dir.string());
  int rendered = 0;

  // returns comparison, one chart per domain directory
  std::map<std::string, std::map<std::string, std::vector<fs::path>>> by_domain;
  for (const fs::path& rec : find_named(root, "record.csv")) {
    const fs::path seed_dir = rec.parent_path();
    const fs::path method_dir = seed_dir.parent_path();
    const fs::path domain_dir = method_dir.parent_path();
    by_domain[domain_dir.string()][method_dir.filename().string()].push_back(rec);
  }
  for (const auto& [domain_path, methods] : by_domain) {
    const std::string domain_name = fs::path(domain_path).filename().string();
    std::vector<Series> series;
    for (const auto& [method, files] : methods) {
      MeanCurve c;
      if (!curve_from_records(files, c)) continue;
      Series s;
      s.label = method + " (" + std::to_string(files.size()) + " seeds)";
      s.x = c.x;
      s.y = c.mean;
      for (std::size_t i = 0; i < c.x.size(); ++i) {
        s.y_lo.push_back(c.mean[i] - c.sd[i]);
        s.y_hi.push_back(c.mean[i] + c.sd[i]);
      }
      series.push_back(std::move(s));
    }
    if (series.empty()) continue;
    const std::string svg = render_line_chart(
        domain_name + ": mean return", "environment steps", "mean return",
        series);
    const fs::path dest = out_dir / (domain_name + "_returns.svg");
    if (write_file(dest, svg)) {
      std::printf("wrote %s\n", dest.string().c_str());
      ++rendered;
    }
  }

  // weight traces, one chart per run with a weights.csv
  for (const fs::path& wfile : find_named(root, "weights.csv")) {
    CsvTable t;
    try {
      t = read_csv(wfile.string());
    } catch (const std::exception& e) {
      std::fprintf(stderr, "warning: skipping %s: %s\n",
                   wfile.string().c_str(), e.what());
      continue;
    }
    const int uc = t.column("update");
    if (uc < 0 || t.rows.empty()) {
      std::fprintf(stderr, "warning: skipping %s: no update column or rows\n",
                   wfile.string().c_str());
      continue;
    }
    std::vector<Series> series;
    for (std::size_t col = 0; col < t.header.size(); ++col) {
      if (t.header[col].rfind("w_", 0) != 0) continue;
      Series s;
      s.label = t.header[col];
      for (const std::vector<double>& row : t.rows) {
        s.x.push_back(row[static_cast<std::size_t>(uc)]);
        s.y.push_back(row[col]);
      }
      series.push_back(std::move(s));
    }
    if (series.empty()) continue;
    const fs::path seed_dir = wfile.parent_path();
    const fs::path method_dir = seed_dir.parent_path();
    const fs::path domain_dir = method_dir.parent_path();
    const std::string stem = domain_dir.filename().string() + "_" +
                             method_dir.filename().string() + "_" +
                             seed_dir.filename().string();
    const std::string svg = render_line_chart(
        stem + ": intrinsic weights", "update", "weight", series);
    const fs::path dest = out_dir / (stem + "_weights.svg");
    if (write_file(dest, svg)) {
      std::printf("wrote %s\n", dest.string().c_str());
      ++rendered;
    }
  }

  if (rendered == 0) {
    std::fprintf(stderr, "error: nothing rendered under %s\n", input.c_str());
    return 1;
  }
  return 0;
}

// ---- eval ----

int cmd_eval(const std::string& dir, int episodes, std::uint64_t seed) {
  const RunConfig cfg = RunConfig::from_kv(read_kv(dir + "/config.txt"));
  const Agent agent = load_agent(dir);
  EnvOptions eopt = cfg.env;
  eopt.max_episode_len = cfg.max_episode_len;
  const std::unique_ptr<Env> env = make_env(cfg.domain, eopt);
  const std::vector<double> rets = evaluate_policy(
      *env, agent.policy_spec, agent.policy, episodes, split_seed(seed, 9000));
  double mean = 0.0;
  for (double r : rets) mean += r;
  mean /= static_cast<double>(rets.size());
  double var = 0.0;
  for (double r : rets) var += (r - mean) * (r - mean);
  std::printf("domain=%s episodes=%d mean_return=%s std_return=%s\n",
              cfg.domain.c_str(), episodes, fmt_double(mean).c_str(),
              fmt_double(std::sqrt(var / static_cast<double>(rets.size()))).c_str());
  return 0;
}

// ---- list-envs ----

int cmd_list_envs() {
  for (const std::string& id : domain_ids()) {
    const std::unique_ptr<Env> env = make_env(id, EnvOptions{});
    std::string events;
    for (const std::string& name : env->event_names()) {
      if (!events.empty()) events += ",";
      events += name;
    }
    std::printf("%-14s obs=%-4d actions=%d events(%d)=[%s]\n", id.c_str(),
                env->obs_dim(), env->num_actions(), env->event_dim(),
                events.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bilevel intrinsic-reward training and baselines"};
  app.require_subcommand(1);

  // train
  TrainOpts t;
  CLI::App* train = app.add_subcommand("train", "Train a single seeded run");
  t.domain_opt = train->add_option("--domain", t.domain, "Environment id");
  t.method_opt = train->add_option("--method", t.method, "mbrd|ppo|cb|pbrs");
  train->add_option("--config", t.config_path, "key=value config file");
  t.seed_opt = train->add_option("--seed", t.seed, "Run seed");
  t.steps_opt = train->add_option("--steps", t.steps, "Total environment steps");
  t.beta_opt = train->add_option("--beta", t.beta, "Regularizer strength");
  train->add_option("--reg-mode", t.reg_mode, "z-norm|weight-anchor")
      ->check(CLI::IsMember({"z-norm", "weight-anchor"}));
  t.gamma_opt = train->add_option("--gamma", t.gamma, "Discount factor");
  t.eplen_opt = train->add_option("--max-ep-len", t.max_ep_len,
                                  "Maximum episode length");
  t.delay_opt = train->add_option("--delay", t.delay,
                                  "Reward delay steps (foraging)");
  train->add_option("--scale", t.scale, "paper|desk")
      ->check(CLI::IsMember({"paper", "desk"}));
  train->add_option("--out", t.out_root, "Output root directory");

  // grid
  std::string g_domains = "foraging,hungry_thirsty,fight_monster";
  int g_seeds = 5, g_jobs = 1;
  std::string g_scale = "paper", g_out = default_out_root();
  long g_steps = 0;
  CLI::App* grid =
      app.add_subcommand("grid", "All methods on the grid-world domains");
  grid->add_option("--domains", g_domains, "Comma-separated domain ids");
  grid->add_option("--seeds", g_seeds, "Seeds per configuration");
  CLI::Option* g_steps_opt =
      grid->add_option("--steps", g_steps, "Total steps override");
  grid->add_option("--scale", g_scale, "paper|desk")
      ->check(CLI::IsMember({"paper", "desk"}));
  grid->add_option("--jobs", g_jobs, "Concurrent runs");
  grid->add_option("--out", g_out, "Output root directory");

  // sweep-beta
  std::string sb_domain = "hungry_thirsty", sb_scale = "paper",
              sb_out = default_out_root();
  std::vector<double> sb_betas = {0.01, 0.0001, 0.0};
  int sb_seeds = 5, sb_jobs = 1;
  long sb_steps = 0;
  CLI::App* sweepb =
      app.add_subcommand("sweep-beta", "Regularizer-strength ablation");
  sweepb->add_option("--domain", sb_domain, "Environment id");
  sweepb->add_option("--betas", sb_betas, "Comma-separated beta values")
      ->delimiter(',');
  sweepb->add_option("--seeds", sb_seeds, "Seeds per beta");
  CLI::Option* sb_steps_opt =
      sweepb->add_option("--steps", sb_steps, "Total steps override");
  sweepb->add_option("--scale", sb_scale, "paper|desk")
      ->check(CLI::IsMember({"paper", "desk"}));
  sweepb->add_option("--jobs", sb_jobs, "Concurrent runs");
  sweepb->add_option("--out", sb_out, "Output root directory");

  // sweep-eplen
  std::vector<int> se_lengths = {50, 100, 200};
  int se_seeds = 5, se_jobs = 1;
  std::string se_scale = "paper", se_out = default_out_root();
  long se_steps = 0;
  CLI::App* sweepe = app.add_subcommand(
      "sweep-eplen", "Episode-length ablation on delayed foraging");
  sweepe->add_option("--lengths", se_lengths, "Comma-separated episode lengths")
      ->delimiter(',');
  sweepe->add_option("--seeds", se_seeds, "Seeds per length");
  CLI::Option* se_steps_opt =
      sweepe->add_option("--steps", se_steps, "Total steps override");
  sweepe->add_option("--scale", se_scale, "paper|desk")
      ->check(CLI::IsMember({"paper", "desk"}));
  sweepe->add_option("--jobs", se_jobs, "Concurrent runs");
  sweepe->add_option("--out", se_out, "Output root directory");

  // eval
  std::string e_dir;
  int e_episodes = 20;
  std::uint64_t e_seed = 0;
  CLI::App* evalc = app.add_subcommand("eval", "Evaluate a saved policy");
  evalc->add_option("run_dir", e_dir, "Directory of a finished run")
      ->required();
  evalc->add_option("--episodes", e_episodes, "Greedy episodes");
  evalc->add_option("--seed", e_seed, "Evaluation seed");

  // plot
  std::string p_input, p_out;
  CLI::App* plot = app.add_subcommand("plot", "Render CSV records to SVG");
  plot->add_option("input", p_input, "Output root or domain directory")
      ->required();
  plot->add_option("--out", p_out, "Directory for SVG files");

  CLI::App* list = app.add_subcommand("list-envs", "List environment ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*train) return cmd_train(t);
    if (*grid)
      return cmd_grid(g_domains, g_seeds, g_scale, g_steps,
                      static_cast<bool>(*g_steps_opt), g_out, g_jobs);
    if (*sweepb) {
      RunConfig base = RunConfig::defaults_for(sb_domain);
      base.method = Method::mbrd;
      base.apply_scale(sb_scale);
      if (*sb_steps_opt) base.total_steps = sb_steps;
      const SweepResult res =
          sweep_beta(base, sb_out, sb_betas, seed_list(sb_seeds), sb_jobs);
      std::printf("summary: %s\n", res.summary_path.c_str());
      return report_runs(res.records) == 0 ? 0 : 1;
    }
    if (*sweepe) {
      RunConfig base = RunConfig::defaults_for("foraging");
      base.apply_scale(se_scale);
      if (*se_steps_opt) base.total_steps = se_steps;
      const SweepResult res = sweep_episode_length(
          base, se_out, se_lengths, seed_list(se_seeds), se_jobs);
      std::printf("summary: %s\n", res.summary_path.c_str());
      return report_runs(res.records) == 0 ? 0 : 1;
    }
    if (*evalc) return cmd_eval(e_dir, e_episodes, e_seed);
    if (*plot) return cmd_plot(p_input, p_out);
    if (*list) return cmd_list_envs();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
