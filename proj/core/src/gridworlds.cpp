#include "mbrd/gridworlds.hpp"

#include <cstdlib>
#include <stdexcept>

namespace mbrd {

int GridWorldBase::manhattan(int a, int b) const {
  int ax = a % cfg_.width, ay = a / cfg_.width;
  int bx = b % cfg_.width, by = b / cfg_.width;
  return std::abs(ax - bx) + std::abs(ay - by);
}

double GridWorldBase::potential() const {
  int goal = goal_cell();
  if (goal < 0) return 0.0;
  return -static_cast<double>(manhattan(agent_, goal)) /
         static_cast<double>(cfg_.width + cfg_.height);
}

int GridWorldBase::move_agent(int action) {
  int x = agent_ % cfg_.width;
  int y = agent_ / cfg_.width;
  switch (action) {
    case 0: y -= 1; break;  // up
    case 1: y += 1; break;  // down
    case 2: x -= 1; break;  // left
    case 3: x += 1; break;  // right
    default: throw std::invalid_argument("invalid move action");
  }
  if (x < 0) x = 0;
  if (x >= cfg_.width) x = cfg_.width - 1;
  if (y < 0) y = 0;
  if (y >= cfg_.height) y = cfg_.height - 1;
  agent_ = y * cfg_.width + x;
  return agent_;
}

std::vector<int> GridWorldBase::place_distinct(int k) {
  std::vector<int> cells(cell_count());
  for (int i = 0; i < cell_count(); ++i) cells[i] = i;
  // partial Fisher-Yates
  for (int i = 0; i < k; ++i) {
    int j = i + uniform_below(rng_, cell_count() - i);
    std::swap(cells[i], cells[j]);
  }
  cells.resize(k);
  return cells;
}

int GridWorldBase::random_empty_cell(const std::vector<int>& occupied) {
  std::vector<int> free;
  free.reserve(cell_count());
  for (int c = 0; c < cell_count(); ++c) {
    bool used = false;
    for (int o : occupied)
      if (o == c) { used = true; break; }
    if (!used) free.push_back(c);
  }
  return free[uniform_below(rng_, static_cast<int>(free.size()))];
}

void GridWorldBase::one_hot(std::vector<double>& obs, int base, int cell) const {
  if (cell >= 0) obs[base + cell] = 1.0;
}

// ---- Foraging ----

std::vector<double> ForagingEnv::observe() const {
  std::vector<double> obs(obs_dim(), 0.0);
  one_hot(obs, 0, agent_);
  one_hot(obs, cell_count(), apple_);
  one_hot(obs, 2 * cell_count(), poison_);
  return obs;
}

std::vector<double> ForagingEnv::reset(std::uint64_t seed) {
  rng_ = make_rng(seed);
  auto cells = place_distinct(3);
  agent_ = cells[0];
  apple_ = cells[1];
  poison_ = cells[2];
  step_ = 0;
  return observe();
}

StepResult ForagingEnv::step(int action) {
  StepResult r;
  r.events.assign(2, 0);
  int cell = move_agent(action);
  if (cell == apple_) {
    r.events[0] = 1;
    r.reward += 1.0;
    apple_ = random_empty_cell({agent_, poison_});
  } else if (cell == poison_) {
    r.events[1] = 1;
    r.reward += -1.0;
    poison_ = random_empty_cell({agent_, apple_});
  }
  step_ += 1;
  r.done = step_ >= cfg_.max_episode_len;
  r.obs = observe();
  return r;
}

// ---- Hungry-Thirsty ----

std::vector<double> HungryThirstyEnv::observe() const {
  std::vector<double> obs(obs_dim(), 0.0);
  one_hot(obs, 0, agent_);
  one_hot(obs, cell_count(), food_);
  one_hot(obs, 2 * cell_count(), water_);
  int base = 3 * cell_count();
  obs[base] = hungry_ ? 1.0 : 0.0;
  obs[base + 1] = thirsty() ? 1.0 : 0.0;
  obs[base + 2] = static_cast<double>(thirst_timer_) / cfg_.thirst_period;
  return obs;
}

std::vector<double> HungryThirstyEnv::reset(std::uint64_t seed) {
  rng_ = make_rng(seed);
  auto cells = place_distinct(3);
  agent_ = cells[0];
  food_ = cells[1];
  water_ = cells[2];
  thirst_timer_ = cfg_.thirst_period;
  hungry_ = false;
  step_ = 0;
  return observe();
}

StepResult HungryThirstyEnv::step(int action) {
  StepResult r;
  r.events.assign(2, 0);
  bool ate = false;
  if (action < 4) {
    move_agent(action);
  } else if (action == 4) {  // eat; fails while thirsty
    if (agent_ == food_ && !thirsty()) {
      r.reward = 1.0;
      r.events[0] = 1;
      ate = true;
    }
  } else if (action == 5) {  // drink
    if (agent_ == water_) {
      r.events[1] = 1;
      thirst_timer_ = cfg_.thirst_period;
    }
  } else {
    throw std::invalid_argument("invalid action");
  }
  hungry_ = !ate;  // non-hungry for exactly one step after a successful eat
  if (thirst_timer_ > 0) thirst_timer_ -= 1;
  step_ += 1;
  r.done = step_ >= cfg_.max_episode_len;
  r.obs = observe();
  return r;
}

// ---- Fight Monster ----

std::vector<double> FightMonsterEnv::observe() const {
  std::vector<double> obs(obs_dim(), 0.0);
  one_hot(obs, 0, agent_);
  one_hot(obs, cell_count(), weapon_present_ ? weapon_ : -1);
  one_hot(obs, 2 * cell_count(), poison_present_ ? poison_ : -1);
  one_hot(obs, 3 * cell_count(), monster_);
  int base = 4 * cell_count();
  obs[base] = buff_ ? 1.0 : 0.0;
  obs[base + 1] = debuff_ ? 1.0 : 0.0;
  return obs;
}

std::vector<double> FightMonsterEnv::reset(std::uint64_t seed) {
  rng_ = make_rng(seed);
  auto cells = place_distinct(4);
  agent_ = cells[0];
  weapon_ = cells[1];
  poison_ = cells[2];
  monster_ = cells[3];
  weapon_present_ = true;
  poison_present_ = true;
  buff_ = false;
  debuff_ = false;
  step_ = 0;
  return observe();
}

StepResult FightMonsterEnv::step(int action) {
  StepResult r;
  r.events.assign(5, 0);
  int cell = move_agent(action);
  if (weapon_present_ && cell == weapon_) {
    weapon_present_ = false;
    buff_ = true;
    r.events[0] = 1;
  } else if (poison_present_ && cell == poison_) {
    poison_present_ = false;
    debuff_ = true;
    r.events[1] = 1;
  } else if (cell == monster_) {
    if (buff_) {  // buff dominates when both are held
      r.reward += 1.0;
      r.events[2] = 1;
    } else if (debuff_) {
      r.reward += -1.0;
      r.events[3] = 1;
    } else {
      r.reward += cfg_.fm_draw_reward;
      r.events[4] = 1;
    }
    r.done = true;
  }
  r.reward += cfg_.fm_step_cost;
  step_ += 1;
  if (step_ >= cfg_.max_episode_len) r.done = true;
  r.obs = observe();
  return r;
}

}  // namespace mbrd
