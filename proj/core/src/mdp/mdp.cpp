#include "bcmec/mdp/mdp.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "bcmec/errors.hpp"

namespace bcmec::mdp {

namespace {

bool level_fits(double level, double committed, double total_hash) {
  if (level == 0.0) return true;
  return level < total_hash && committed + level <= total_hash;
}

double scale(double value, double lo, double hi) { return (value - lo) / (hi - lo); }

}  // namespace

void HashLevels::validate(double total_hash) const {
  if (levels.empty()) throw ConfigError("hash levels: at least one level required");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!(levels[i] >= 0.0)) throw ConfigError("hash levels: levels must be non-negative");
    if (i > 0 && !(levels[i] > levels[i - 1])) throw ConfigError("hash levels: must be strictly increasing");
  }
  if (levels.back() > total_hash) throw ConfigError("hash levels: top level exceeds total network hash");
}

void RewardWeights::validate() const {
  if (!(w_reward >= 0.0) || !(w_revenue >= 0.0) || !(w_latency >= 0.0)) {
    throw ConfigError("reward weights must be non-negative");
  }
}

std::size_t ActionSpace::subactions() const { return subaction_space(num_ues, hash_levels.size()); }

double ActionSpace::committed_hash(std::span<const ServerDecision> partial) const {
  double sum = 0.0;
  for (const auto& d : partial) sum += hash_levels[d.hash_level];
  return sum;
}

std::vector<double> encode_state(const SystemState& state, std::size_t num_ues, std::size_t num_servers,
                                 const StateScaling& scaling) {
  if (state.ue_demands.size() != num_ues || state.server_reputations.size() != num_servers) {
    throw ConfigError("encode_state: expected " + std::to_string(num_ues) + " demands and " +
                      std::to_string(num_servers) + " reputations, got " +
                      std::to_string(state.ue_demands.size()) + " and " +
                      std::to_string(state.server_reputations.size()));
  }
  std::vector<double> features;
  features.reserve(num_ues + num_servers);
  for (double d : state.ue_demands) features.push_back(scale(d, scaling.demand_min, scaling.demand_max));
  for (double r : state.server_reputations) {
    features.push_back(scale(r, scaling.reputation_min, scaling.reputation_max));
  }
  return features;
}

std::size_t subaction_space(std::size_t num_ues, std::size_t num_levels) { return num_ues * num_levels; }

ActionMask feasible_mask(const ActionSpace& space, std::span<const ServerDecision> partial) {
  if (partial.size() >= space.num_servers) {
    throw InfeasibleAction("feasible_mask: all " + std::to_string(space.num_servers) + " servers already decided");
  }
  const std::size_t levels = space.hash_levels.size();
  std::vector<std::uint8_t> ue_free(space.num_ues, 1);
  for (const auto& d : partial) {
    if (d.ue >= space.num_ues || d.hash_level >= levels) {
      throw InfeasibleAction("feasible_mask: partial decision out of range");
    }
    ue_free[d.ue] = 0;
  }
  const double committed = space.committed_hash(partial);
  ActionMask mask(space.subactions(), 0);
  bool any = false;
  for (std::size_t u = 0; u < space.num_ues; ++u) {
    if (!ue_free[u]) continue;
    for (std::size_t l = 0; l < levels; ++l) {
      if (level_fits(space.hash_levels[l], committed, space.total_hash)) {
        mask[u * levels + l] = 1;
        any = true;
      }
    }
  }
  if (!any) throw InfeasibleAction("feasible_mask: no feasible sub-action for server " + std::to_string(partial.size()));
  return mask;
}

std::optional<std::string> find_violation(const ActionSpace& space, const JointAction& action) {
  if (action.decisions.size() != space.num_servers) {
    return "expected " + std::to_string(space.num_servers) + " server decisions, got " +
           std::to_string(action.decisions.size());
  }
  std::vector<std::uint8_t> taken(space.num_ues, 0);
  double committed = 0.0;
  for (std::size_t m = 0; m < action.decisions.size(); ++m) {
    const auto& d = action.decisions[m];
    if (d.ue >= space.num_ues) {
      return "server " + std::to_string(m) + " selects UE " + std::to_string(d.ue) + " outside [0, " +
             std::to_string(space.num_ues) + ")";
    }
    if (d.hash_level >= space.hash_levels.size()) {
      return "server " + std::to_string(m) + " uses unknown hash level " + std::to_string(d.hash_level);
    }
    if (taken[d.ue]) return "UE " + std::to_string(d.ue) + " selected by more than one server";
    taken[d.ue] = 1;
    const double p = space.hash_levels[d.hash_level];
    if (p != 0.0 && !(p < space.total_hash)) {
      return "server " + std::to_string(m) + " hash power " + std::to_string(p) + " not below network total";
    }
    committed += p;
  }
  if (committed > space.total_hash) {
    return "total hash power " + std::to_string(committed) + " exceeds network total " +
           std::to_string(space.total_hash);
  }
  return std::nullopt;
}

void check_feasible(const ActionSpace& space, const JointAction& action) {
  if (auto violation = find_violation(space, action)) throw InfeasibleAction("infeasible action: " + *violation);
}

double server_reward(const mec::ServerOutcome& server, const RewardWeights& weights) {
  return weights.w_reward * server.expected_mining_reward_tokens + weights.w_revenue * server.revenue_tokens -
         weights.w_latency * server.latency_s;
}

double reward(const mec::TimeslotOutcome& outcome, const RewardWeights& weights) {
  double total = 0.0;
  for (const auto& server : outcome.servers) total += server_reward(server, weights);
  return total;
}

void write_action_trace_header(std::ostream& out) { out << "timeslot,server,ue,hash_level\n"; }

void write_action_trace(std::ostream& out, std::uint64_t timeslot, const JointAction& action) {
  for (std::size_t m = 0; m < action.decisions.size(); ++m) {
    out << timeslot << ',' << m << ',' << action.decisions[m].ue << ',' << action.decisions[m].hash_level << '\n';
  }
}

std::vector<JointAction> read_action_trace(std::istream& in) {
  std::vector<JointAction> actions;
  std::string line;
  bool header = true;
  std::uint64_t current = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      if (line.rfind("timeslot", 0) == 0) continue;
    }
    std::istringstream row(line);
    std::uint64_t t = 0;
    std::size_t m = 0, ue = 0, level = 0;
    char c1 = 0, c2 = 0, c3 = 0;
    if (!(row >> t >> c1 >> m >> c2 >> ue >> c3 >> level) || c1 != ',' || c2 != ',' || c3 != ',') {
      throw ConfigError("action trace: malformed row '" + line + "'");
    }
    if (actions.empty() || t != current) {
      if (!actions.empty() && t < current) throw ConfigError("action trace: timeslots out of order");
      actions.emplace_back();
      current = t;
    }
    if (m != actions.back().decisions.size()) throw ConfigError("action trace: servers out of order");
    actions.back().decisions.push_back({ue, level});
  }
  return actions;
}

}  // namespace bcmec::mdp
