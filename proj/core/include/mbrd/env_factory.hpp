#pragma once

#include <memory>

#include "mbrd/env.hpp"

namespace mbrd {

struct EnvOptions {
  int max_episode_len = 0;  // 0: domain default (200 grid-world, 1000 synthetic)
  int delay_steps = -1;     // foraging reward delay; -1: domain default of 10
  int thirst_period = 5;
  double fm_draw_reward = -0.1;
  double fm_step_cost = 0.0;
};

// Known domain ids:
//   foraging       5x5 grid, apple/poison, rewards delayed 10 steps
//   hungry_thirsty 5x5 grid, food/water, thirst gates eating
//   fight_monster  5x5 grid, weapon/poison/monster, fight ends the episode
//   synth_hopper   synthetic chain, end-of-episode reward, 11 game points
//   synth_swimmer  synthetic chain, end-of-episode reward, 8 game points
std::unique_ptr<Env> make_env(const std::string& domain,
                              const EnvOptions& opts = {});

std::vector<std::string> domain_ids();

}  // namespace mbrd
