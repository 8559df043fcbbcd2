#include "bcmec/mec/reputation.hpp"

#include "bcmec/errors.hpp"
#include "bcmec/mec/formulas.hpp"

namespace bcmec::mec {

void ReputationTracker::record(double desired_s, double actual_s) {
  if (!(desired_s >= 0.0) || !(actual_s >= 0.0)) throw DomainError("reputation: latencies must be non-negative");
  history_.emplace_back(desired_s, actual_s);
  if (window_ != 0 && history_.size() > window_) {
    history_.pop_front();
    // Re-sum after eviction instead of subtracting, so the sums stay exact
    // sums of the retained window.
    desired_sum_ = 0.0;
    actual_sum_ = 0.0;
    for (const auto& [d, a] : history_) {
      desired_sum_ += d;
      actual_sum_ += a;
    }
    return;
  }
  desired_sum_ += desired_s;
  actual_sum_ += actual_s;
}

void ReputationTracker::clear() {
  history_.clear();
  desired_sum_ = 0.0;
  actual_sum_ = 0.0;
}

double ReputationTracker::score() const { return reputation_score(desired_sum_, actual_sum_); }

}  // namespace bcmec::mec
