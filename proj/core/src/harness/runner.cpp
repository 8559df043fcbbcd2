#include "bcmec/harness/runner.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "bcmec/errors.hpp"

namespace bcmec::harness {

namespace {

constexpr std::uint64_t kWarmupEnvStream = 99;
constexpr std::uint64_t kEvalEnvStream = 100;

using Clock = std::chrono::steady_clock;

double seconds(Clock::duration d) { return std::chrono::duration<double>(d).count(); }

bool uses_replay(Scheme scheme) { return scheme == Scheme::double_dqn || scheme == Scheme::classic_dqn; }

mec::EnvConfig seeded(mec::EnvConfig env, std::uint64_t seed) {
  env.rng_seed = seed;
  return env;
}

}  // namespace

std::string scheme_label(Scheme scheme, const AblationFlags& ablation) {
  std::string label = to_string(scheme);
  if (ablation.disable_resource_allocation) label += "-no_resource_allocation";
  if (ablation.disable_user_selection) label += "-no_user_selection";
  return label;
}

void check_ledger_invariants(const mec::MecEnvironment& env) {
  const auto& ledger = env.ledger();
  if (!ledger.chain().verify()) throw InvariantViolation("ledger: chain verification failed");
  const double initial = static_cast<double>(env.config().num_ues) * env.config().initial_ue_balance;
  const double expected = initial + ledger.minted_total();
  const double drift = std::abs(ledger.total_balance() - expected);
  if (!(drift <= 1e-9 * std::max(1.0, expected))) {
    throw InvariantViolation("ledger: token conservation violated by " + std::to_string(drift));
  }
}

EvalSummary evaluate(const ExperimentConfig& config, Controller& controller, std::uint64_t seed) {
  if (config.eval_rollouts == 0) throw ConfigError("evaluation needs at least one rollout");
  EvalSummary summary;
  double utility = 0.0, mining = 0.0, revenue = 0.0, latency = 0.0;
  for (std::uint64_t r = 0; r < config.eval_rollouts; ++r) {
    mec::MecEnvironment env(seeded(config.env, derive_seed(seed, kEvalEnvStream + r)));
    for (std::uint64_t t = 0; t < config.eval_timeslots; ++t) {
      const auto step = env.step(controller.decide(env, false));
      utility += step.outcome.total_reward;
      mining += step.outcome.total_mining_reward();
      revenue += step.outcome.total_revenue();
      latency += step.outcome.total_latency();
      if (env.timeslot() % env.config().horizon == 0) env.reset_episode();
    }
  }
  const double rollouts = static_cast<double>(config.eval_rollouts);
  const double slots = rollouts * static_cast<double>(config.eval_timeslots);
  summary.slots = config.eval_timeslots;
  summary.total_utility = utility / rollouts;
  summary.average_utility = utility / slots;
  summary.mining_reward = mining / slots;
  summary.revenue = revenue / slots;
  summary.latency = latency / slots;
  summary.ecl_s = latency / rollouts;
  return summary;
}

RunResult run_scheme(const ExperimentConfig& config, Scheme scheme, const AblationFlags& ablation,
                     std::uint64_t seed, const RunOptions& options) {
  config.validate();
  RunResult result;
  result.scheme = scheme;
  result.label = scheme_label(scheme, ablation);
  result.seed = seed;

  auto controller = make_controller(config, scheme, ablation, seed);
  if (uses_replay(scheme) && config.warmup_transitions > 0) {
    mec::MecEnvironment warm(seeded(config.env, derive_seed(seed, kWarmupEnvStream)));
    controller->warm_up(warm, config.warmup_transitions);
  }

  mec::MecEnvironment env(seeded(config.env, seed));
  const std::uint64_t horizon = config.env.horizon;
  Clock::duration compute{}, stepping{};
  result.training.reserve(config.total_timeslots);
  for (std::uint64_t t = 0; t < config.total_timeslots; ++t) {
    const auto t0 = Clock::now();
    auto action = controller->decide(env, true);
    const auto t1 = Clock::now();
    auto step = env.step(action);
    const auto t2 = Clock::now();
    const bool terminal = env.timeslot() % horizon == 0;
    controller->learn(env, step.outcome, step.next_state, terminal);
    const auto t3 = Clock::now();
    compute += (t1 - t0) + (t3 - t2);
    stepping += t2 - t1;

    const auto& o = step.outcome;
    result.training.push_back(
        {t, t / horizon, o.total_reward, o.total_mining_reward(), o.total_revenue(), o.total_latency()});
    if (options.record_trace) {
      result.outcomes.push_back(o);
      result.actions.push_back(std::move(action));
    }
    if (terminal) env.reset_episode();
  }
  result.art_s = seconds(compute);
  result.env_s = seconds(stepping);
  check_ledger_invariants(env);
  if (options.record_trace) {
    std::ostringstream chain;
    env.ledger().chain().export_lines(chain);
    result.chain_export = chain.str();
  }

  if (options.evaluate) result.eval = evaluate(config, *controller, seed);
  result.checkpoint = controller->checkpoint();
  return result;
}

}  // namespace bcmec::harness
