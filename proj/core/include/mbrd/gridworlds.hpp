#pragma once

#include "mbrd/env.hpp"
#include "mbrd/rng.hpp"

namespace mbrd {

struct GridConfig {
  int width = 5;
  int height = 5;
  int max_episode_len = 200;
  int thirst_period = 5;         // hungry-thirsty: steps of non-thirst after a drink
  double fm_draw_reward = -0.1;  // fight monster: fight without buff or debuff
  double fm_step_cost = 0.0;     // fight monster: optional cost added every step
};

// Shared mechanics: agent cell, wall-clipped movement, seeded placement.
class GridWorldBase : public Env {
 public:
  explicit GridWorldBase(const GridConfig& cfg) : cfg_(cfg) {}

  int num_actions() const override { return 4; }  // up, down, left, right
  double potential() const override;

  int agent_cell() const { return agent_; }
  int step_count() const { return step_; }

 protected:
  int cell_count() const { return cfg_.width * cfg_.height; }
  // Moves the agent one cell; walls clip. Returns the cell entered.
  int move_agent(int action);
  // k distinct cells, uniformly at random.
  std::vector<int> place_distinct(int k);
  int random_empty_cell(const std::vector<int>& occupied);
  int manhattan(int a, int b) const;
  void one_hot(std::vector<double>& obs, int base, int cell) const;

  // Cell the shaping potential points at; -1 disables shaping.
  virtual int goal_cell() const = 0;

  GridConfig cfg_;
  Rng rng_{0};
  int agent_ = 0;
  int step_ = 0;
};

// Apple and poison respawn when eaten; rewards are emitted immediately here
// and delayed by DelayWrapper in the standard configuration.
// Events: [eats apple, eats poison].
class ForagingEnv : public GridWorldBase {
 public:
  explicit ForagingEnv(const GridConfig& cfg) : GridWorldBase(cfg) {}

  std::vector<double> reset(std::uint64_t seed) override;
  StepResult step(int action) override;
  int obs_dim() const override { return 3 * cell_count(); }
  int event_dim() const override { return 2; }
  std::vector<std::string> event_names() const override {
    return {"eat_apple", "eat_poison"};
  }

  int apple_cell() const { return apple_; }
  int poison_cell() const { return poison_; }

 protected:
  int goal_cell() const override { return apple_; }

 private:
  std::vector<double> observe() const;
  int apple_ = 0;
  int poison_ = 0;
};

// Eat succeeds only at the food cell while non-thirsty and pays 1; drink at
// the water cell refills the thirst timer and pays nothing.
// Actions: 4 moves + eat + drink. Events: [eat, drink].
class HungryThirstyEnv : public GridWorldBase {
 public:
  explicit HungryThirstyEnv(const GridConfig& cfg) : GridWorldBase(cfg) {}

  std::vector<double> reset(std::uint64_t seed) override;
  StepResult step(int action) override;
  int obs_dim() const override { return 3 * cell_count() + 3; }
  int num_actions() const override { return 6; }
  int event_dim() const override { return 2; }
  std::vector<std::string> event_names() const override { return {"eat", "drink"}; }

  bool thirsty() const { return thirst_timer_ == 0; }
  bool hungry() const { return hungry_; }
  int thirst_timer() const { return thirst_timer_; }

 protected:
  int goal_cell() const override { return food_; }

 private:
  std::vector<double> observe() const;
  int food_ = 0;
  int water_ = 0;
  int thirst_timer_ = 0;
  bool hungry_ = false;
};

// Touching the monster resolves the fight and ends the episode: +1 with the
// buff (weapon), -1 with only the debuff (poison), -0.1 otherwise. Buff wins
// when both flags are held.
// Events: [get buff, get debuff, win, lose, draw].
class FightMonsterEnv : public GridWorldBase {
 public:
  explicit FightMonsterEnv(const GridConfig& cfg) : GridWorldBase(cfg) {}

  std::vector<double> reset(std::uint64_t seed) override;
  StepResult step(int action) override;
  int obs_dim() const override { return 4 * cell_count() + 2; }
  int event_dim() const override { return 5; }
  std::vector<std::string> event_names() const override {
    return {"get_buff", "get_debuff", "win_fight", "lose_fight", "draw_fight"};
  }

  bool has_buff() const { return buff_; }
  bool has_debuff() const { return debuff_; }

 protected:
  int goal_cell() const override { return weapon_present_ ? weapon_ : monster_; }

 private:
  std::vector<double> observe() const;
  int weapon_ = 0;
  int poison_ = 0;
  int monster_ = 0;
  bool weapon_present_ = false;
  bool poison_present_ = false;
  bool buff_ = false;
  bool debuff_ = false;
};

}  // namespace mbrd
