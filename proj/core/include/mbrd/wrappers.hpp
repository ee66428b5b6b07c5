#pragma once

#include <deque>
#include <memory>

#include "mbrd/env.hpp"

namespace mbrd {

// One bucketed reward stream: `edges` are the ascending interior boundaries,
// giving edges.size()+1 buckets with unbounded ends. Buckets are
// left-closed right-open unless `right_closed` is set (then left-open
// right-closed, used for streams whose values accumulate at an upper edge).
struct BucketStream {
  std::string name;
  std::vector<double> edges;
  bool right_closed = false;
  int index_offset = 0;  // global event index of this stream's first bucket
  int source = -1;       // -1: inner scalar reward; >= 0: index into streams
};

struct BucketTable {
  std::vector<BucketStream> streams;
  int event_dim() const;
};

// Global event index of the unique bucket containing r.
int bucketize(double r, const BucketTable& table, int stream);

// Game-point tables for bucketing a scalar-reward task.
BucketTable hopper_table();   // 11 buckets over the total step reward
BucketTable swimmer_table();  // forward (5 buckets) + control (3 buckets)

// Delivers every extrinsic reward k steps late; events pass through
// undelayed. Rewards still pending at episode end are folded into the
// terminal step, so episode sums are conserved for any k.
class DelayWrapper : public Env {
 public:
  DelayWrapper(std::unique_ptr<Env> inner, int k);

  std::vector<double> reset(std::uint64_t seed) override;
  StepResult step(int action) override;
  int obs_dim() const override { return inner_->obs_dim(); }
  int num_actions() const override { return inner_->num_actions(); }
  int event_dim() const override { return inner_->event_dim(); }
  std::vector<std::string> event_names() const override {
    return inner_->event_names();
  }
  double potential() const override { return inner_->potential(); }

 private:
  std::unique_ptr<Env> inner_;
  int k_;
  std::deque<double> pending_;
};

// Replaces the per-step extrinsic reward by 0 except at episode end, where
// the accumulated sum is delivered. Events are rebuilt each step by
// bucketizing the configured reward streams.
class SparseEpisodeWrapper : public Env {
 public:
  SparseEpisodeWrapper(std::unique_ptr<Env> inner, BucketTable table);

  std::vector<double> reset(std::uint64_t seed) override;
  StepResult step(int action) override;
  int obs_dim() const override { return inner_->obs_dim(); }
  int num_actions() const override { return inner_->num_actions(); }
  int event_dim() const override { return table_.event_dim(); }
  std::vector<std::string> event_names() const override;
  double potential() const override { return inner_->potential(); }

 private:
  std::unique_ptr<Env> inner_;
  BucketTable table_;
  double accum_ = 0.0;
};

}  // namespace mbrd
