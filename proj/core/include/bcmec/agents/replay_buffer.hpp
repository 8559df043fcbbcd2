#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bcmec/mdp/mdp.hpp"
#include "bcmec/rng.hpp"

namespace bcmec::agents {

struct Experience {
  std::vector<double> state;
  std::size_t action = 0;
  double reward = 0.0;
  std::vector<double> next_state;
  mdp::ActionMask next_mask;  // sub-actions feasible in next_state
  bool terminal = false;
};

// Fixed-capacity ring of experiences; the oldest entry is overwritten first.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Experience experience);

  std::size_t size() const { return storage_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return storage_.empty(); }

  // Logical index 0 is the oldest retained experience.
  const Experience& operator[](std::size_t i) const;

  // `batch` distinct logical indices, uniformly at random.
  std::vector<std::size_t> sample_indices(std::size_t batch, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::vector<Experience> storage_;
  std::size_t next_ = 0;  // slot overwritten by the next push once full
};

// Linear decay from `start` to `end` over `decay_steps`, then flat.
struct EpsilonSchedule {
  double start = 1.0;
  double end = 0.05;
  std::uint64_t decay_steps = 1;

  double value(std::uint64_t step) const;
};

}  // namespace bcmec::agents
