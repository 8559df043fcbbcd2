#include "bcmec/harness/experiment.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "../kv_file.hpp"
#include "../mec/env_keys.hpp"
#include "bcmec/errors.hpp"
#include "bcmec/ledger/chain.hpp"

namespace bcmec::harness {

using bcmec::detail::format_double;
using bcmec::detail::to_bool;
using bcmec::detail::to_double;
using bcmec::detail::to_uint;
using bcmec::detail::to_uint_list;

const char* to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::double_dqn: return "double_dqn";
    case Scheme::classic_dqn: return "classic_dqn";
    case Scheme::tabular_q: return "tabular_q";
    case Scheme::ga: return "ga";
    case Scheme::random: return "random";
    case Scheme::min_latency: return "min_latency";
  }
  return "?";
}

Scheme scheme_from_string(const std::string& name) {
  for (Scheme s : {Scheme::double_dqn, Scheme::classic_dqn, Scheme::tabular_q, Scheme::ga, Scheme::random,
                   Scheme::min_latency}) {
    if (name == to_string(s)) return s;
  }
  throw ConfigError("unknown scheme: " + name);
}

std::vector<Scheme> schemes_from_list(const std::string& list) {
  std::vector<Scheme> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(scheme_from_string(item.substr(b, e - b + 1)));
  }
  if (out.empty()) throw ConfigError("scheme list is empty");
  return out;
}

void ExperimentConfig::validate() const {
  env.validate();
  if (schemes.empty()) throw ConfigError("experiment: no schemes");
  if (seeds.empty()) throw ConfigError("experiment: no seeds");
  if (eval_timeslots < 1) throw ConfigError("experiment: eval_timeslots must be at least 1");
  if (train_every < 1) throw ConfigError("experiment: train_every must be at least 1");
  if (dqn.hidden.empty()) throw ConfigError("agent: at least one hidden layer");
  for (auto h : dqn.hidden) {
    if (h == 0) throw ConfigError("agent: hidden layer sizes must be positive");
  }
  if (!(dqn.gamma >= 0.0 && dqn.gamma < 1.0)) throw ConfigError("agent: gamma must be in [0, 1)");
  if (!(dqn.adam.learning_rate > 0.0)) throw ConfigError("agent: learning_rate must be positive");
  if (dqn.batch_size < 1) throw ConfigError("agent: batch_size must be at least 1");
  if (dqn.target_sync_period < 1) throw ConfigError("agent: target_sync_period must be at least 1");
  if (replay_capacity < dqn.batch_size) throw ConfigError("agent: replay_capacity smaller than batch_size");
  if (!(epsilon_start >= 0.0 && epsilon_start <= 1.0 && epsilon_end >= 0.0 && epsilon_end <= 1.0)) {
    throw ConfigError("agent: epsilon values must be in [0, 1]");
  }
  if (!(epsilon_decay_fraction > 0.0 && epsilon_decay_fraction <= 1.0)) {
    throw ConfigError("agent: epsilon_decay_fraction must be in (0, 1]");
  }
  if (tabular.demand_bins < 1 || tabular.reputation_bins < 1) throw ConfigError("tabular: bins must be positive");
  if (!(tabular.alpha > 0.0 && tabular.alpha <= 1.0)) throw ConfigError("tabular: alpha must be in (0, 1]");
  if (!(tabular.gamma >= 0.0 && tabular.gamma < 1.0)) throw ConfigError("tabular: gamma must be in [0, 1)");
  if (ga.population < 2 || ga.generations < 1 || ga.tournament_size < 1) {
    throw ConfigError("ga: population >= 2, generations >= 1, tournament_size >= 1");
  }
  if (jobs < 1) throw ConfigError("experiment: jobs must be at least 1");
}

namespace {

std::vector<std::size_t> to_size_list(const std::string& key, const std::string& value) {
  std::vector<std::size_t> out;
  for (auto v : to_uint_list(key, value)) out.push_back(static_cast<std::size_t>(v));
  return out;
}

void apply_key(ExperimentConfig& c, const std::string& key, const std::string& v) {
  if (mec::detail::apply_env_key(c.env, key, v)) return;
  const auto dot = key.find('.');
  const std::string section = dot == std::string::npos ? std::string() : key.substr(0, dot);
  const std::string name = dot == std::string::npos ? key : key.substr(dot + 1);
  auto num = [&] { return to_double(key, v); };
  auto count = [&] { return static_cast<std::size_t>(to_uint(key, v)); };

  if (section == "experiment") {
    if (name == "schemes") c.schemes = schemes_from_list(v);
    else if (name == "total_timeslots") c.total_timeslots = to_uint(key, v);
    else if (name == "seeds") c.seeds = to_uint_list(key, v);
    else if (name == "disable_resource_allocation") c.ablation.disable_resource_allocation = to_bool(key, v);
    else if (name == "disable_user_selection") c.ablation.disable_user_selection = to_bool(key, v);
    else if (name == "output_dir") c.output_dir = v;
    else if (name == "warmup_transitions") c.warmup_transitions = to_uint(key, v);
    else if (name == "eval_timeslots") c.eval_timeslots = to_uint(key, v);
    else if (name == "eval_rollouts") c.eval_rollouts = to_uint(key, v);
    else if (name == "train_every") c.train_every = to_uint(key, v);
    else if (name == "jobs") c.jobs = static_cast<unsigned>(to_uint(key, v));
    else throw ConfigError("config: unknown key " + key);
  } else if (section == "agent") {
    if (name == "hidden") c.dqn.hidden = to_size_list(key, v);
    else if (name == "output_activation") c.dqn.output = nn::output_activation_from_string(v);
    else if (name == "gamma") c.dqn.gamma = num();
    else if (name == "learning_rate") c.dqn.adam.learning_rate = num();
    else if (name == "beta1") c.dqn.adam.beta1 = num();
    else if (name == "beta2") c.dqn.adam.beta2 = num();
    else if (name == "adam_epsilon") c.dqn.adam.epsilon = num();
    else if (name == "batch_size") c.dqn.batch_size = count();
    else if (name == "target_sync_period") c.dqn.target_sync_period = to_uint(key, v);
    else if (name == "replay_capacity") c.replay_capacity = count();
    else if (name == "epsilon_start") c.epsilon_start = num();
    else if (name == "epsilon_end") c.epsilon_end = num();
    else if (name == "epsilon_decay_fraction") c.epsilon_decay_fraction = num();
    else if (name == "normalized_logistic_head") c.normalized_logistic_head = to_bool(key, v);
    else throw ConfigError("config: unknown key " + key);
  } else if (section == "tabular") {
    if (name == "demand_bins") c.tabular.demand_bins = count();
    else if (name == "reputation_bins") c.tabular.reputation_bins = count();
    else if (name == "alpha") c.tabular.alpha = num();
    else if (name == "gamma") c.tabular.gamma = num();
    else throw ConfigError("config: unknown key " + key);
  } else if (section == "ga") {
    if (name == "population") c.ga.population = count();
    else if (name == "generations") c.ga.generations = count();
    else if (name == "tournament_size") c.ga.tournament_size = count();
    else if (name == "crossover_prob") c.ga.crossover_prob = num();
    else if (name == "mutation_prob") c.ga.mutation_prob = num();
    else throw ConfigError("config: unknown key " + key);
  } else {
    throw ConfigError("config: unknown key " + key);
  }
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(values[i]);
  }
  return out;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::istream& in, ExperimentConfig base) {
  for (const auto& [key, value] : bcmec::detail::read_key_values(in)) apply_key(base, key, value);
  if (base.normalized_logistic_head) base.dqn.output = nn::OutputActivation::logistic;
  base.validate();
  return base;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse_experiment_config(in);
}

void write_experiment_config(std::ostream& out, const ExperimentConfig& c) {
  mec::write_env_config(out, c.env);
  std::string schemes;
  for (std::size_t i = 0; i < c.schemes.size(); ++i) {
    if (i) schemes += ", ";
    schemes += to_string(c.schemes[i]);
  }
  out << "\n[experiment]\n"
      << "schemes = " << schemes << '\n'
      << "total_timeslots = " << c.total_timeslots << '\n'
      << "seeds = " << join(c.seeds) << '\n'
      << "disable_resource_allocation = " << (c.ablation.disable_resource_allocation ? "true" : "false") << '\n'
      << "disable_user_selection = " << (c.ablation.disable_user_selection ? "true" : "false") << '\n'
      << "output_dir = " << c.output_dir << '\n'
      << "warmup_transitions = " << c.warmup_transitions << '\n'
      << "eval_timeslots = " << c.eval_timeslots << '\n'
      << "eval_rollouts = " << c.eval_rollouts << '\n'
      << "train_every = " << c.train_every << '\n'
      << "jobs = " << c.jobs << '\n'
      << "\n[agent]\n"
      << "hidden = " << join(c.dqn.hidden) << '\n'
      << "output_activation = " << nn::to_string(c.dqn.output) << '\n'
      << "gamma = " << format_double(c.dqn.gamma) << '\n'
      << "learning_rate = " << format_double(c.dqn.adam.learning_rate) << '\n'
      << "beta1 = " << format_double(c.dqn.adam.beta1) << '\n'
      << "beta2 = " << format_double(c.dqn.adam.beta2) << '\n'
      << "adam_epsilon = " << format_double(c.dqn.adam.epsilon) << '\n'
      << "batch_size = " << c.dqn.batch_size << '\n'
      << "target_sync_period = " << c.dqn.target_sync_period << '\n'
      << "replay_capacity = " << c.replay_capacity << '\n'
      << "epsilon_start = " << format_double(c.epsilon_start) << '\n'
      << "epsilon_end = " << format_double(c.epsilon_end) << '\n'
      << "epsilon_decay_fraction = " << format_double(c.epsilon_decay_fraction) << '\n'
      << "normalized_logistic_head = " << (c.normalized_logistic_head ? "true" : "false") << '\n'
      << "\n[tabular]\n"
      << "demand_bins = " << c.tabular.demand_bins << '\n'
      << "reputation_bins = " << c.tabular.reputation_bins << '\n'
      << "alpha = " << format_double(c.tabular.alpha) << '\n'
      << "gamma = " << format_double(c.tabular.gamma) << '\n'
      << "\n[ga]\n"
      << "population = " << c.ga.population << '\n'
      << "generations = " << c.ga.generations << '\n'
      << "tournament_size = " << c.ga.tournament_size << '\n'
      << "crossover_prob = " << format_double(c.ga.crossover_prob) << '\n'
      << "mutation_prob = " << format_double(c.ga.mutation_prob) << '\n';
}

std::string config_hash(const ExperimentConfig& config) {
  std::ostringstream text;
  write_experiment_config(text, config);
  return ledger::to_hex(ledger::sha256(text.str())).substr(0, 16);
}

}  // namespace bcmec::harness
