#include <algorithm>
#include <numeric>
#include <sstream>

#include "bcmec/agents/dqn.hpp"
#include "bcmec/agents/features.hpp"
#include "bcmec/agents/genetic.hpp"
#include "bcmec/agents/replay_buffer.hpp"
#include "bcmec/agents/tabular_q.hpp"
#include "bcmec/errors.hpp"
#include "bcmec/harness/runner.hpp"

namespace bcmec::harness {

namespace {

constexpr std::uint64_t kAgentStream = 10;
constexpr std::uint64_t kPolicyStream = 11;

agents::EpsilonSchedule make_epsilon(const ExperimentConfig& config) {
  const double steps = config.epsilon_decay_fraction * static_cast<double>(config.total_timeslots) *
                       static_cast<double>(config.env.num_servers);
  return {config.epsilon_start, config.epsilon_end, std::max<std::uint64_t>(1, static_cast<std::uint64_t>(steps))};
}

std::size_t pick_uniform(const mdp::ActionMask& mask, Rng& rng) {
  std::vector<std::size_t> open;
  for (std::size_t a = 0; a < mask.size(); ++a) {
    if (mask[a]) open.push_back(a);
  }
  if (open.empty()) throw InfeasibleAction("no feasible sub-action");
  return open[rng.index(open.size())];
}

// Affine map of one server's reward term onto [0, 1 - gamma], used with the
// logistic Q head so discounted returns stay inside (0, 1).
class RewardNormalizer {
 public:
  RewardNormalizer(const mec::EnvConfig& env, double gamma, bool enabled) : scale_(1.0 - gamma), enabled_(enabled) {
    double min_capacity = env.capacity_ghz;
    for (double c : env.server_capacity_ghz) min_capacity = std::min(min_capacity, c);
    const auto& w = env.reward_weights;
    lo_ = -w.w_latency * env.latency_scale * env.data_size_max_mb * env.demand_max_gcycles / min_capacity;
    hi_ = w.w_reward * env.mining.block_reward() + w.w_revenue * env.price_unit * env.demand_max_gcycles;
  }

  double operator()(double r) const {
    if (!enabled_) return r;
    return std::clamp((r - lo_) / (hi_ - lo_), 0.0, 1.0) * scale_;
  }

 private:
  double lo_ = 0.0;
  double hi_ = 1.0;
  double scale_;
  bool enabled_;
};

class DqnController final : public Controller {
 public:
  DqnController(const ExperimentConfig& config, agents::TargetRule rule, const AblationFlags& ablation,
                std::uint64_t seed)
      : env_config_(config.env),
        space_(config.env.action_space()),
        ablation_(ablation),
        encoder_(config.env.action_space(), config.env.scaling),
        agent_(encoder_.input_size(), space_.subactions(), with_rule(config.dqn, rule),
               derive_seed(seed, kAgentStream)),
        buffer_(config.replay_capacity),
        epsilon_(make_epsilon(config)),
        normalize_(config.env, config.dqn.gamma, config.normalized_logistic_head),
        train_every_(config.train_every) {}

  mdp::JointAction decide(const mec::MecEnvironment& env, bool explore) override {
    pending_.clear();
    std::vector<mdp::ServerDecision> partial;
    for (std::size_t m = 0; m < space_.num_servers; ++m) {
      Pending p;
      p.input = encoder_.encode(env.state(), m, partial);
      p.mask = ablated_mask(space_, partial, ablation_, env.timeslot());
      if (!explore) {
        p.action = agent_.greedy_action(p.input, p.mask);
      } else {
        const double eps = warming_up_ ? 1.0 : epsilon_.value(epsilon_step_++);
        p.action = agent_.select_action(p.input, p.mask, eps);
      }
      partial.push_back(space_.decode(p.action));
      pending_.push_back(std::move(p));
    }
    return {std::move(partial)};
  }

  void learn(const mec::MecEnvironment& env, const mec::TimeslotOutcome& outcome, const mdp::SystemState& next_state,
             bool terminal) override {
    const std::size_t servers = pending_.size();
    for (std::size_t m = 0; m < servers; ++m) {
      agents::Experience e;
      e.action = pending_[m].action;
      e.reward = normalize_(mdp::server_reward(outcome.servers[m], env_config_.reward_weights));
      if (m + 1 < servers) {
        e.next_state = pending_[m + 1].input;
        e.next_mask = pending_[m + 1].mask;
      } else {
        e.next_state = encoder_.encode(next_state, 0, {});
        e.next_mask = ablated_mask(space_, {}, ablation_, env.timeslot());
        e.terminal = terminal;
      }
      e.state = std::move(pending_[m].input);
      buffer_.push(std::move(e));
      if (warming_up_) continue;
      if (++since_train_ >= train_every_) {
        since_train_ = 0;
        agent_.train_step(buffer_);
      }
    }
  }

  void warm_up(mec::MecEnvironment& env, std::uint64_t transitions) override {
    warming_up_ = true;
    std::uint64_t pushed = 0;
    while (pushed < transitions) {
      const auto action = decide(env, true);
      const auto step = env.step(action);
      const bool terminal = env.timeslot() % env.config().horizon == 0;
      learn(env, step.outcome, step.next_state, terminal);
      if (terminal) env.reset_episode();
      pushed += space_.num_servers;
    }
    warming_up_ = false;
  }

  std::string checkpoint() const override {
    std::ostringstream out;
    agent_.save(out, epsilon_step_);
    return out.str();
  }

 private:
  struct Pending {
    std::vector<double> input;
    mdp::ActionMask mask;
    std::size_t action = 0;
  };

  static agents::DqnConfig with_rule(agents::DqnConfig config, agents::TargetRule rule) {
    config.rule = rule;
    return config;
  }

  mec::EnvConfig env_config_;
  mdp::ActionSpace space_;
  AblationFlags ablation_;
  agents::FeatureEncoder encoder_;
  agents::DqnAgent agent_;
  agents::ReplayBuffer buffer_;
  agents::EpsilonSchedule epsilon_;
  RewardNormalizer normalize_;
  std::uint64_t train_every_;
  std::uint64_t since_train_ = 0;
  std::uint64_t epsilon_step_ = 0;
  bool warming_up_ = false;
  std::vector<Pending> pending_;
};

class TabularController final : public Controller {
 public:
  TabularController(const ExperimentConfig& config, const AblationFlags& ablation, std::uint64_t seed)
      : weights_(config.env.reward_weights),
        space_(config.env.action_space()),
        ablation_(ablation),
        agent_(config.env.num_ues, config.env.num_servers, config.env.hash_levels.size(), config.env.scaling,
               config.tabular),
        epsilon_(make_epsilon(config)),
        rng_(derive_seed(seed, kPolicyStream)) {}

  mdp::JointAction decide(const mec::MecEnvironment& env, bool explore) override {
    pending_.clear();
    std::vector<mdp::ServerDecision> partial;
    for (std::size_t m = 0; m < space_.num_servers; ++m) {
      Pending p;
      p.state = agent_.state_index(env.state(), m);
      p.mask = ablated_mask(space_, partial, ablation_, env.timeslot());
      const double eps = explore ? epsilon_.value(epsilon_step_++) : 0.0;
      p.action = agent_.select_action(p.state, p.mask, eps, rng_);
      partial.push_back(space_.decode(p.action));
      pending_.push_back(std::move(p));
    }
    return {std::move(partial)};
  }

  void learn(const mec::MecEnvironment& env, const mec::TimeslotOutcome& outcome, const mdp::SystemState& next_state,
             bool terminal) override {
    const std::size_t servers = pending_.size();
    for (std::size_t m = 0; m < servers; ++m) {
      const double r = mdp::server_reward(outcome.servers[m], weights_);
      if (m + 1 < servers) {
        agent_.update(pending_[m].state, pending_[m].action, r, pending_[m + 1].state, false, pending_[m + 1].mask);
      } else {
        agent_.update(pending_[m].state, pending_[m].action, r, agent_.state_index(next_state, 0), terminal,
                      ablated_mask(space_, {}, ablation_, env.timeslot()));
      }
    }
  }

 private:
  struct Pending {
    std::size_t state = 0;
    mdp::ActionMask mask;
    std::size_t action = 0;
  };

  mdp::RewardWeights weights_;
  mdp::ActionSpace space_;
  AblationFlags ablation_;
  agents::TabularQAgent agent_;
  agents::EpsilonSchedule epsilon_;
  Rng rng_;
  std::uint64_t epsilon_step_ = 0;
  std::vector<Pending> pending_;
};

class GaController final : public Controller {
 public:
  GaController(const ExperimentConfig& config, std::uint64_t seed)
      : space_(config.env.action_space()), params_(config.ga), rng_(derive_seed(seed, kPolicyStream)) {}

  mdp::JointAction decide(const mec::MecEnvironment& env, bool) override {
    return agents::ga_optimize(
        space_, [&env](const mdp::JointAction& a) { return env.evaluate_utility(a); }, params_, rng_);
  }

 private:
  mdp::ActionSpace space_;
  agents::GaParams params_;
  Rng rng_;
};

class RandomController final : public Controller {
 public:
  RandomController(const ExperimentConfig& config, const AblationFlags& ablation, std::uint64_t seed)
      : space_(config.env.action_space()), ablation_(ablation), rng_(derive_seed(seed, kPolicyStream)) {}

  mdp::JointAction decide(const mec::MecEnvironment& env, bool) override {
    std::vector<mdp::ServerDecision> partial;
    for (std::size_t m = 0; m < space_.num_servers; ++m) {
      partial.push_back(space_.decode(pick_uniform(ablated_mask(space_, partial, ablation_, env.timeslot()), rng_)));
    }
    return {std::move(partial)};
  }

 private:
  mdp::ActionSpace space_;
  AblationFlags ablation_;
  Rng rng_;
};

// Fastest servers take the lightest tasks (smallest data x demand); each
// server then mines at the highest level the remaining budget allows.
class MinLatencyController final : public Controller {
 public:
  explicit MinLatencyController(const ExperimentConfig& config) : space_(config.env.action_space()) {
    servers_.resize(config.env.num_servers);
    std::iota(servers_.begin(), servers_.end(), 0);
    std::stable_sort(servers_.begin(), servers_.end(), [&](std::size_t a, std::size_t b) {
      return config.env.capacity_of(a) > config.env.capacity_of(b);
    });
  }

  mdp::JointAction decide(const mec::MecEnvironment& env, bool) override {
    const auto& tasks = env.tasks();
    std::vector<std::size_t> ues(tasks.size());
    std::iota(ues.begin(), ues.end(), 0);
    std::stable_sort(ues.begin(), ues.end(), [&](std::size_t a, std::size_t b) {
      return tasks[a].data_size_mb * tasks[a].cpu_demand_gcycles < tasks[b].data_size_mb * tasks[b].cpu_demand_gcycles;
    });
    std::vector<std::size_t> ue_of(space_.num_servers);
    for (std::size_t i = 0; i < servers_.size(); ++i) ue_of[servers_[i]] = ues[i];

    std::vector<mdp::ServerDecision> partial;
    for (std::size_t m = 0; m < space_.num_servers; ++m) {
      const auto mask = mdp::feasible_mask(space_, partial);
      std::size_t level = 0;
      for (std::size_t l = space_.hash_levels.size(); l-- > 0;) {
        if (mask[space_.encode({ue_of[m], l})]) {
          level = l;
          break;
        }
      }
      partial.push_back({ue_of[m], level});
    }
    return {std::move(partial)};
  }

 private:
  mdp::ActionSpace space_;
  std::vector<std::size_t> servers_;
};

}  // namespace

std::size_t median_hash_level(const mdp::HashLevels& levels) {
  std::vector<std::size_t> nonzero;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] > 0.0) nonzero.push_back(i);
  }
  if (nonzero.empty()) return 0;
  return nonzero[(nonzero.size() - 1) / 2];
}

mdp::ActionMask ablated_mask(const mdp::ActionSpace& space, std::span<const mdp::ServerDecision> partial,
                             const AblationFlags& ablation, std::uint64_t timeslot) {
  auto mask = mdp::feasible_mask(space, partial);
  if (!ablation.any()) return mask;
  const std::size_t levels = space.hash_levels.size();
  if (ablation.disable_user_selection) {
    const std::size_t fixed = (timeslot + partial.size()) % space.num_ues;
    for (std::size_t a = 0; a < mask.size(); ++a) {
      if (space.decode(a).ue != fixed) mask[a] = 0;
    }
  }
  if (ablation.disable_resource_allocation) {
    const std::size_t target = median_hash_level(space.hash_levels);
    for (std::size_t ue = 0; ue < space.num_ues; ++ue) {
      std::size_t keep = levels;
      for (std::size_t l = target + 1; l-- > 0;) {
        if (mask[ue * levels + l]) {
          keep = l;
          break;
        }
      }
      for (std::size_t l = 0; l < levels; ++l) {
        if (l != keep) mask[ue * levels + l] = 0;
      }
    }
  }
  if (std::find(mask.begin(), mask.end(), 1) == mask.end()) {
    throw InfeasibleAction("ablation leaves no feasible sub-action");
  }
  return mask;
}

std::unique_ptr<Controller> make_controller(const ExperimentConfig& config, Scheme scheme,
                                            const AblationFlags& ablation, std::uint64_t seed) {
  if (ablation.any() && (scheme == Scheme::ga || scheme == Scheme::min_latency)) {
    throw ConfigError(std::string("ablation modes do not apply to ") + to_string(scheme));
  }
  switch (scheme) {
    case Scheme::double_dqn:
      return std::make_unique<DqnController>(config, agents::TargetRule::double_dqn, ablation, seed);
    case Scheme::classic_dqn:
      return std::make_unique<DqnController>(config, agents::TargetRule::classic, ablation, seed);
    case Scheme::tabular_q: return std::make_unique<TabularController>(config, ablation, seed);
    case Scheme::ga: return std::make_unique<GaController>(config, seed);
    case Scheme::random: return std::make_unique<RandomController>(config, ablation, seed);
    case Scheme::min_latency: return std::make_unique<MinLatencyController>(config);
  }
  throw ConfigError("unknown scheme");
}

}  // namespace bcmec::harness
