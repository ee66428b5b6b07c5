#include "mbrd/synth.hpp"

#include <algorithm>
#include <stdexcept>

namespace mbrd {

std::vector<double> SynthChainEnv::observe() const {
  return {std::clamp(pos_, -10.0, 10.0) / 10.0, 1.0};
}

double SynthChainEnv::potential() const {
  return std::clamp(pos_, -10.0, 10.0) / 10.0;
}

std::vector<double> SynthChainEnv::reset(std::uint64_t seed) {
  Rng rng = make_rng(seed);
  pos_ = static_cast<double>(uniform_below(rng, 7) - 3);
  step_ = 0;
  return observe();
}

StepResult SynthChainEnv::step(int action) {
  if (action < 0 || action >= 5) throw std::invalid_argument("invalid action");
  const double u = static_cast<double>(action - 2);
  pos_ += u;
  const double sgn = pos_ > 0.0 ? 1.0 : (pos_ < 0.0 ? -1.0 : 0.0);
  const double r_forward = 0.75 * u + 0.05 * sgn;
  const double r_control = -0.375 * u * u;

  StepResult r;
  r.reward = r_forward + r_control;
  r.streams = {r_forward, r_control};
  r.events = {};
  step_ += 1;
  r.done = step_ >= cfg_.max_episode_len;
  r.obs = observe();
  return r;
}

}  // namespace mbrd
