#include "mbrd/env_factory.hpp"

#include <stdexcept>

#include "mbrd/gridworlds.hpp"
#include "mbrd/synth.hpp"
#include "mbrd/wrappers.hpp"

namespace mbrd {

std::vector<std::string> domain_ids() {
  return {"foraging", "hungry_thirsty", "fight_monster", "synth_hopper",
          "synth_swimmer"};
}

std::unique_ptr<Env> make_env(const std::string& domain, const EnvOptions& opts) {
  GridConfig gc;
  if (opts.max_episode_len > 0) gc.max_episode_len = opts.max_episode_len;
  gc.thirst_period = opts.thirst_period;
  gc.fm_draw_reward = opts.fm_draw_reward;
  gc.fm_step_cost = opts.fm_step_cost;

  if (domain == "foraging") {
    int k = opts.delay_steps < 0 ? 10 : opts.delay_steps;
    auto inner = std::make_unique<ForagingEnv>(gc);
    if (k == 0) return inner;
    return std::make_unique<DelayWrapper>(std::move(inner), k);
  }
  if (domain == "hungry_thirsty") return std::make_unique<HungryThirstyEnv>(gc);
  if (domain == "fight_monster") return std::make_unique<FightMonsterEnv>(gc);

  SynthConfig sc;
  sc.max_episode_len = opts.max_episode_len > 0 ? opts.max_episode_len : 1000;
  if (domain == "synth_hopper")
    return std::make_unique<SparseEpisodeWrapper>(
        std::make_unique<SynthChainEnv>(sc), hopper_table());
  if (domain == "synth_swimmer")
    return std::make_unique<SparseEpisodeWrapper>(
        std::make_unique<SynthChainEnv>(sc), swimmer_table());

  throw std::invalid_argument("unknown domain: " + domain);
}

}  // namespace mbrd
