#pragma once

#include <cstddef>
#include <deque>
#include <utility>

namespace bcmec::mec {

// Desired vs actual service latency of one server over its last `window`
// served tasks (window 0 keeps everything).
class ReputationTracker {
 public:
  explicit ReputationTracker(std::size_t window = 0) : window_(window) {}

  void record(double desired_s, double actual_s);
  void clear();

  double desired_sum() const { return desired_sum_; }
  double actual_sum() const { return actual_sum_; }
  double score() const;
  std::size_t samples() const { return history_.size(); }

 private:
  std::size_t window_;
  std::deque<std::pair<double, double>> history_;
  double desired_sum_ = 0.0;
  double actual_sum_ = 0.0;
};

}  // namespace bcmec::mec
