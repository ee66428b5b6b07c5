#pragma once

#include "mbrd/env.hpp"
#include "mbrd/rng.hpp"

namespace mbrd {

struct SynthConfig {
  int max_episode_len = 1000;
};

// 1-D chain with dense two-stream rewards, a desk-scale stand-in for a
// continuous-control task. State is a scalar position p; reset draws
// p0 uniformly from {-3..3}. Actions a in {0..4} map to thrust
// u = a - 2. Dynamics and rewards, exactly:
//
//   p'        = p + u
//   r_forward = 0.75*u + 0.05*sign(p')     (sign(0) = 0)
//   r_control = -0.375*u*u
//   reward    = r_forward + r_control
//
// streams = {r_forward, r_control}; observation = {clamp(p,-10,10)/10, 1}.
class SynthChainEnv : public Env {
 public:
  explicit SynthChainEnv(const SynthConfig& cfg) : cfg_(cfg) {}

  std::vector<double> reset(std::uint64_t seed) override;
  StepResult step(int action) override;
  int obs_dim() const override { return 2; }
  int num_actions() const override { return 5; }
  int event_dim() const override { return 0; }
  std::vector<std::string> event_names() const override { return {}; }
  double potential() const override;

  double position() const { return pos_; }

 private:
  std::vector<double> observe() const;
  SynthConfig cfg_;
  double pos_ = 0.0;
  int step_ = 0;
};

}  // namespace mbrd
