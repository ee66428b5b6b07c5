#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mbrd {

// Per-step event counts (game points). Grid-world channels are 0/1 per step.
using EventVector = std::vector<int>;

struct StepResult {
  std::vector<double> obs;      // next observation
  double reward = 0.0;          // extrinsic reward delivered this step
  std::vector<double> streams;  // per-stream raw rewards, for bucketing wrappers
  EventVector events;
  bool done = false;
};

// Episodic environment with event-feature emission. Deterministic given
// (reset seed, action sequence). One instance is single-threaded.
class Env {
 public:
  virtual ~Env() = default;

  virtual std::vector<double> reset(std::uint64_t seed) = 0;
  virtual StepResult step(int action) = 0;

  virtual int obs_dim() const = 0;
  virtual int num_actions() const = 0;
  virtual int event_dim() const = 0;
  virtual std::vector<std::string> event_names() const = 0;

  // Shaping potential of the current state, in [-1, 0] for grid-worlds.
  virtual double potential() const = 0;
};

// 64-bit FNV-1a over the raw bytes of an observation vector.
std::uint64_t obs_hash(const std::vector<double>& obs);

// One transition as a trace line: step, obs hash, action, r_ex, events, done.
std::string trace_line(int step, const std::vector<double>& obs, int action,
                       double reward, const EventVector& events, bool done);

// Roll an action sequence from reset(seed) and return one line per transition.
std::vector<std::string> record_trace(Env& env, std::uint64_t seed,
                                      const std::vector<int>& actions);

}  // namespace mbrd
