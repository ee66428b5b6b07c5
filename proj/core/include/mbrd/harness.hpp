#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mbrd/env_factory.hpp"
#include "mbrd/io.hpp"
#include "mbrd/ppo.hpp"
#include "mbrd/reward_design.hpp"

namespace mbrd {

enum class Method { mbrd, ppo, cb, pbrs };
Method parse_method(const std::string& s);
std::string method_name(Method m);
std::vector<Method> all_methods();

// Full description of one seeded training run.
struct RunConfig {
  std::string domain = "foraging";
  Method method = Method::mbrd;
  long total_steps = 2'000'000;
  int update_period = 1024;
  int eval_period = 10240;
  int eval_episodes = 20;
  int max_episode_len = 200;
  double gamma = 0.999;
  double beta = 1e-3;
  RegMode reg_mode = RegMode::weight_anchor;
  double outer_lr = 3e-3;
  double w_init_value = 0.1;
  std::vector<int> policy_hidden = {8, 8};
  std::vector<int> value_hidden = {32, 32};
  PpoConfig ppo;  // gamma is overwritten from `gamma` when the run starts
  EnvOptions env;
  std::uint64_t seed = 0;
  std::string out_dir;  // empty = keep everything in memory

  static RunConfig defaults_for(const std::string& domain);
  void apply_scale(const std::string& scale);  // "paper" (no-op) | "desk" (/4)

  KvPairs to_kv() const;
  static RunConfig from_kv(const KvPairs& kv);
};

struct EvalPoint {
  long step = 0;
  double mean_return = 0.0;
  double std_return = 0.0;
};

struct UpdatePoint {
  long update = 0;
  long step = 0;  // steps collected once this update finished
  PpoDiagnostics diag;
  double train_return = 0.0;  // mean finished-episode extrinsic return; nan if none
  // mbrd only:
  std::vector<double> w;
  double cosine = 0.0;
  double z_ex_norm = 0.0;
  double z_in_norm = 0.0;
};

struct RunRecord {
  RunConfig config;
  std::vector<EvalPoint> evals;
  std::vector<UpdatePoint> updates;
  std::vector<double> final_w;  // empty for non-mbrd methods
  int outer_skips = 0;          // non-finite outer gradients dropped
  bool aborted = false;
  std::string abort_reason;

  double final_mean_return() const;  // last eval point; nan when none
};

// Executes the full training loop for one seed. When out_dir is set, writes
// config.txt, record.csv, updates.csv, weights.csv (mbrd) and agent.txt there,
// incrementally. A numerical abort flags the record and leaves a trailing
// '#' marker in the CSVs instead of throwing.
RunRecord run(const RunConfig& cfg);

// Runs each config on its own thread, at most `jobs` in flight. Records come
// back in input order.
std::vector<RunRecord> run_pool(const std::vector<RunConfig>& cfgs, int jobs);

struct CurvePoint {
  long step = 0;
  double mean = 0.0;
  double stddev = 0.0;
  int count = 0;
};

// Mean/std of eval returns across records at each shared eval point. Records
// of unequal length are truncated to the common horizon; `truncated` reports
// whether that happened.
std::vector<CurvePoint> aggregate(const std::vector<RunRecord>& records,
                                  bool* truncated = nullptr);

struct SweepResult {
  std::vector<RunRecord> records;
  std::string summary_path;
};

// One run per (beta, seed); summary table keyed by beta under out_root.
SweepResult sweep_beta(const RunConfig& base, const std::string& out_root,
                       const std::vector<double>& betas,
                       const std::vector<std::uint64_t>& seeds, int jobs);

// One run per (method in {mbrd, ppo}, length, seed) on delayed Foraging;
// summary keyed by (method, length).
SweepResult sweep_episode_length(const RunConfig& base,
                                 const std::string& out_root,
                                 const std::vector<int>& lengths,
                                 const std::vector<std::uint64_t>& seeds,
                                 int jobs);

// out_root/<domain>/<method>/<seed>
std::string run_dir(const std::string& out_root, const std::string& domain,
                    const std::string& method_tag, std::uint64_t seed);

void save_agent(const std::string& dir, const Agent& agent);
Agent load_agent(const std::string& dir);

}  // namespace mbrd
