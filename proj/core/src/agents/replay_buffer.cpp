#include "bcmec/agents/replay_buffer.hpp"

#include <stdexcept>
#include <unordered_set>

#include "bcmec/errors.hpp"

namespace bcmec::agents {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ConfigError("replay buffer: capacity must be positive");
  storage_.reserve(std::min<std::size_t>(capacity, 1 << 16));
}

void ReplayBuffer::push(Experience experience) {
  if (storage_.size() < capacity_) {
    storage_.push_back(std::move(experience));
    return;
  }
  storage_[next_] = std::move(experience);
  next_ = (next_ + 1) % capacity_;
}

const Experience& ReplayBuffer::operator[](std::size_t i) const {
  if (i >= storage_.size()) throw std::out_of_range("replay buffer index");
  if (storage_.size() < capacity_) return storage_[i];
  return storage_[(next_ + i) % capacity_];
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t batch, Rng& rng) const {
  const std::size_t n = storage_.size();
  if (batch > n) throw std::invalid_argument("replay buffer: batch larger than buffer");
  // Floyd's algorithm: `batch` distinct draws in O(batch).
  std::vector<std::size_t> picked;
  picked.reserve(batch);
  std::unordered_set<std::size_t> seen;
  seen.reserve(batch * 2);
  for (std::size_t j = n - batch; j < n; ++j) {
    const std::size_t t = rng.index(j + 1);
    const std::size_t choice = seen.contains(t) ? j : t;
    seen.insert(choice);
    picked.push_back(choice);
  }
  return picked;
}

double EpsilonSchedule::value(std::uint64_t step) const {
  if (decay_steps == 0 || step >= decay_steps) return end;
  const double fraction = static_cast<double>(step) / static_cast<double>(decay_steps);
  return start + (end - start) * fraction;
}

}  // namespace bcmec::agents
