#include "mbrd/wrappers.hpp"

#include <stdexcept>

namespace mbrd {

int BucketTable::event_dim() const {
  int dim = 0;
  for (const auto& s : streams)
    dim = std::max(dim, s.index_offset + static_cast<int>(s.edges.size()) + 1);
  return dim;
}

int bucketize(double r, const BucketTable& table, int stream) {
  const BucketStream& s = table.streams.at(stream);
  int bucket = 0;
  for (double e : s.edges) {
    const bool below = s.right_closed ? (e < r) : (e <= r);
    if (below) ++bucket;
  }
  return s.index_offset + bucket;
}

BucketTable hopper_table() {
  BucketTable t;
  t.streams.push_back(
      {"total", {-3, -2, -1, -0.5, 0, 0.5, 1, 1.5, 2, 3}, false, 0, -1});
  return t;
}

BucketTable swimmer_table() {
  BucketTable t;
  t.streams.push_back({"fwd", {0, 0.5, 1, 2}, false, 0, 0});
  // Control cost tops out at 0 (zero action), so this stream closes on the
  // right: (-inf,-2] (-2,-1] (-1,0].
  t.streams.push_back({"ctl", {-2, -1}, true, 5, 1});
  return t;
}

// ---- DelayWrapper ----

DelayWrapper::DelayWrapper(std::unique_ptr<Env> inner, int k)
    : inner_(std::move(inner)), k_(k) {
  if (k < 0) throw std::invalid_argument("delay k must be >= 0");
}

std::vector<double> DelayWrapper::reset(std::uint64_t seed) {
  pending_.assign(k_ + 1, 0.0);
  return inner_->reset(seed);
}

StepResult DelayWrapper::step(int action) {
  StepResult r = inner_->step(action);
  pending_[k_] += r.reward;
  double due = pending_.front();
  pending_.pop_front();
  pending_.push_back(0.0);
  if (r.done) {
    for (double d : pending_) due += d;
    pending_.assign(k_ + 1, 0.0);
  }
  r.reward = due;
  return r;
}

// ---- SparseEpisodeWrapper ----

SparseEpisodeWrapper::SparseEpisodeWrapper(std::unique_ptr<Env> inner,
                                           BucketTable table)
    : inner_(std::move(inner)), table_(std::move(table)) {}

std::vector<std::string> SparseEpisodeWrapper::event_names() const {
  std::vector<std::string> names(table_.event_dim());
  for (const auto& s : table_.streams)
    for (int b = 0; b <= static_cast<int>(s.edges.size()); ++b)
      names[s.index_offset + b] = s.name + "_gp" + std::to_string(s.index_offset + b);
  return names;
}

std::vector<double> SparseEpisodeWrapper::reset(std::uint64_t seed) {
  accum_ = 0.0;
  return inner_->reset(seed);
}

StepResult SparseEpisodeWrapper::step(int action) {
  StepResult r = inner_->step(action);
  accum_ += r.reward;
  EventVector events(table_.event_dim(), 0);
  for (size_t s = 0; s < table_.streams.size(); ++s) {
    const int src = table_.streams[s].source;
    const double value = src < 0 ? r.reward : r.streams.at(src);
    events[bucketize(value, table_, static_cast<int>(s))] = 1;
  }
  r.events = std::move(events);
  if (r.done) {
    r.reward = accum_;
    accum_ = 0.0;
  } else {
    r.reward = 0.0;
  }
  return r;
}

}  // namespace mbrd
