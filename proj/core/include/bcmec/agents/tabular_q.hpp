#pragma once

#include <cstddef>
#include <vector>

#include "bcmec/mdp/mdp.hpp"
#include "bcmec/rng.hpp"

namespace bcmec::agents {

// Dense Q-table; unvisited entries read as zero.
class QTable {
 public:
  QTable(std::size_t states, std::size_t actions) : actions_(actions), values_(states * actions, 0.0) {}

  double& at(std::size_t state, std::size_t action) { return values_[state * actions_ + action]; }
  double at(std::size_t state, std::size_t action) const { return values_[state * actions_ + action]; }
  std::size_t states() const { return actions_ ? values_.size() / actions_ : 0; }
  std::size_t actions() const { return actions_; }

  // Max over all actions, or over `mask` when given.
  double max_value(std::size_t state, const mdp::ActionMask* mask = nullptr) const;
  std::size_t argmax(std::size_t state, const mdp::ActionMask& mask) const;

 private:
  std::size_t actions_;
  std::vector<double> values_;
};

// Q(s,a) += alpha * (r + gamma * max Q(s',.) - Q(s,a)). The bootstrap term
// is dropped for terminal transitions.
void q_learning_update(QTable& table, std::size_t state, std::size_t action, double reward, std::size_t next_state,
                       double alpha, double gamma, bool terminal = false,
                       const mdp::ActionMask* next_mask = nullptr);

struct TabularConfig {
  std::size_t demand_bins = 8;
  std::size_t reputation_bins = 8;
  double alpha = 0.1;
  double gamma = 0.85;
};

// Tabular baseline over an abstracted state: mean UE demand and mean server
// reputation, each quantized, crossed with the deciding server's index.
class TabularQAgent {
 public:
  TabularQAgent(std::size_t num_ues, std::size_t num_servers, std::size_t num_levels, mdp::StateScaling scaling,
                TabularConfig config);

  std::size_t state_index(const mdp::SystemState& state, std::size_t server) const;

  std::size_t select_action(std::size_t state, const mdp::ActionMask& mask, double epsilon, Rng& rng) const;
  void update(std::size_t state, std::size_t action, double reward, std::size_t next_state, bool terminal,
              const mdp::ActionMask& next_mask);

  const QTable& table() const { return table_; }
  const TabularConfig& config() const { return config_; }

 private:
  std::size_t bin(double value, double lo, double hi, std::size_t bins) const;

  std::size_t num_servers_;
  mdp::StateScaling scaling_;
  TabularConfig config_;
  QTable table_;
};

}  // namespace bcmec::agents
