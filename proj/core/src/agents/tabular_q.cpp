#include "bcmec/agents/tabular_q.hpp"

#include <algorithm>
#include <limits>

#include "bcmec/agents/dqn.hpp"
#include "bcmec/errors.hpp"

namespace bcmec::agents {

double QTable::max_value(std::size_t state, const mdp::ActionMask* mask) const {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < actions_; ++a) {
    if (mask && !(*mask)[a]) continue;
    best = std::max(best, at(state, a));
  }
  if (best == -std::numeric_limits<double>::infinity()) throw InfeasibleAction("QTable: no action to maximize over");
  return best;
}

std::size_t QTable::argmax(std::size_t state, const mdp::ActionMask& mask) const {
  return masked_argmax(std::span<const double>(values_.data() + state * actions_, actions_), mask);
}

void q_learning_update(QTable& table, std::size_t state, std::size_t action, double reward, std::size_t next_state,
                       double alpha, double gamma, bool terminal, const mdp::ActionMask* next_mask) {
  const double bootstrap = terminal ? 0.0 : gamma * table.max_value(next_state, next_mask);
  double& q = table.at(state, action);
  q += alpha * (reward + bootstrap - q);
}

TabularQAgent::TabularQAgent(std::size_t num_ues, std::size_t num_servers, std::size_t num_levels,
                             mdp::StateScaling scaling, TabularConfig config)
    : num_servers_(num_servers),
      scaling_(scaling),
      config_(config),
      table_(config.demand_bins * config.reputation_bins * num_servers,
             mdp::subaction_space(num_ues, num_levels)) {
  if (config.demand_bins == 0 || config.reputation_bins == 0) throw ConfigError("tabular: bins must be positive");
  if (!(config.alpha > 0.0 && config.alpha <= 1.0)) throw ConfigError("tabular: alpha must lie in (0, 1]");
  if (!(config.gamma >= 0.0 && config.gamma < 1.0)) throw ConfigError("tabular: gamma must lie in [0, 1)");
}

std::size_t TabularQAgent::bin(double value, double lo, double hi, std::size_t bins) const {
  const double t = (value - lo) / (hi - lo);
  if (!(t > 0.0)) return 0;
  return std::min(bins - 1, static_cast<std::size_t>(t * static_cast<double>(bins)));
}

std::size_t TabularQAgent::state_index(const mdp::SystemState& state, std::size_t server) const {
  double demand = 0.0;
  for (double d : state.ue_demands) demand += d;
  demand /= static_cast<double>(std::max<std::size_t>(1, state.ue_demands.size()));
  double reputation = 0.0;
  for (double r : state.server_reputations) reputation += r;
  reputation /= static_cast<double>(std::max<std::size_t>(1, state.server_reputations.size()));
  const std::size_t d = bin(demand, scaling_.demand_min, scaling_.demand_max, config_.demand_bins);
  const std::size_t r = bin(reputation, scaling_.reputation_min, scaling_.reputation_max, config_.reputation_bins);
  return (d * config_.reputation_bins + r) * num_servers_ + server;
}

std::size_t TabularQAgent::select_action(std::size_t state, const mdp::ActionMask& mask, double epsilon,
                                         Rng& rng) const {
  if (rng.bernoulli(epsilon)) {
    std::vector<std::size_t> feasible;
    for (std::size_t a = 0; a < mask.size(); ++a) {
      if (mask[a]) feasible.push_back(a);
    }
    if (feasible.empty()) throw InfeasibleAction("tabular: empty mask");
    return feasible[rng.index(feasible.size())];
  }
  return table_.argmax(state, mask);
}

void TabularQAgent::update(std::size_t state, std::size_t action, double reward, std::size_t next_state,
                           bool terminal, const mdp::ActionMask& next_mask) {
  q_learning_update(table_, state, action, reward, next_state, config_.alpha, config_.gamma, terminal, &next_mask);
}

}  // namespace bcmec::agents
