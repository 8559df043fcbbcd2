#include "bcmec/mec/config.hpp"

#include <ostream>

#include "../kv_file.hpp"
#include "bcmec/errors.hpp"
#include "env_keys.hpp"

namespace bcmec::mec {

using bcmec::detail::format_double;
using bcmec::detail::format_double_list;
using bcmec::detail::to_double;
using bcmec::detail::to_double_list;
using bcmec::detail::to_uint;

void EnvConfig::validate() const {
  if (num_servers < 1) throw ConfigError("env: num_servers must be at least 1");
  if (num_ues < num_servers) {
    throw ConfigError("env: num_ues (" + std::to_string(num_ues) + ") must be at least num_servers (" +
                      std::to_string(num_servers) + ")");
  }
  if (!(price_unit > 0.0)) throw ConfigError("env: price_unit must be positive");
  if (!(total_network_hash > 0.0)) throw ConfigError("env: total_network_hash must be positive");
  if (horizon < 1) throw ConfigError("env: horizon must be at least 1");
  if (!(capacity_ghz > 0.0)) throw ConfigError("env: capacity_ghz must be positive");
  if (!server_capacity_ghz.empty()) {
    if (server_capacity_ghz.size() != num_servers) {
      throw ConfigError("env: server_capacity_ghz needs one entry per server");
    }
    for (double c : server_capacity_ghz) {
      if (!(c > 0.0)) throw ConfigError("env: server capacities must be positive");
    }
  }
  if (!(data_size_min_mb > 0.0) || data_size_max_mb < data_size_min_mb) {
    throw ConfigError("env: data size range must be positive and ordered");
  }
  if (!(demand_min_gcycles > 0.0) || demand_max_gcycles < demand_min_gcycles) {
    throw ConfigError("env: demand range must be positive and ordered");
  }
  if (!(slack_factor > 0.0)) throw ConfigError("env: slack_factor must be positive");
  if (!(reference_capacity_ghz > 0.0)) throw ConfigError("env: reference_capacity_ghz must be positive");
  if (!(latency_scale > 0.0)) throw ConfigError("env: latency_scale must be positive");
  if (!(initial_ue_balance >= 0.0)) throw ConfigError("env: initial_ue_balance must be non-negative");
  if (!(scaling.demand_max > scaling.demand_min) || !(scaling.reputation_max > scaling.reputation_min)) {
    throw ConfigError("env: feature scaling ranges must have max > min");
  }
  mining.validate();
  gas.validate();
  hash_levels.validate(total_network_hash);
  reward_weights.validate();
  if (hash_levels[0] > 0.0 && static_cast<double>(num_servers) * hash_levels[0] > total_network_hash) {
    throw ConfigError("env: lowest hash level times num_servers exceeds the network total");
  }
}

double EnvConfig::capacity_of(std::size_t server) const {
  return server_capacity_ghz.empty() ? capacity_ghz : server_capacity_ghz.at(server);
}

mdp::ActionSpace EnvConfig::action_space() const {
  return {num_ues, num_servers, hash_levels, total_network_hash};
}

namespace detail {

bool apply_env_key(EnvConfig& c, const std::string& key, const std::string& v) {
  const auto dot = key.find('.');
  const std::string section = dot == std::string::npos ? std::string() : key.substr(0, dot);
  const std::string name = dot == std::string::npos ? key : key.substr(dot + 1);
  auto num = [&] { return to_double(key, v); };
  auto count = [&] { return static_cast<std::size_t>(to_uint(key, v)); };

  if (section == "env") {
    if (name == "num_ues") c.num_ues = count();
    else if (name == "num_servers") c.num_servers = count();
    else if (name == "price_unit") c.price_unit = num();
    else if (name == "total_network_hash") c.total_network_hash = num();
    else if (name == "horizon") c.horizon = count();
    else if (name == "seed") c.rng_seed = to_uint(key, v);
    else if (name == "w_reward") c.reward_weights.w_reward = num();
    else if (name == "w_revenue") c.reward_weights.w_revenue = num();
    else if (name == "w_latency") c.reward_weights.w_latency = num();
    else if (name == "capacity_ghz") c.capacity_ghz = num();
    else if (name == "server_capacity_ghz") c.server_capacity_ghz = to_double_list(key, v);
    else if (name == "data_size_min_mb") c.data_size_min_mb = num();
    else if (name == "data_size_max_mb") c.data_size_max_mb = num();
    else if (name == "demand_min_gcycles") c.demand_min_gcycles = num();
    else if (name == "demand_max_gcycles") c.demand_max_gcycles = num();
    else if (name == "slack_factor") c.slack_factor = num();
    else if (name == "reference_capacity_ghz") c.reference_capacity_ghz = num();
    else if (name == "latency_scale") c.latency_scale = num();
    else if (name == "reputation_window") c.reputation_window = count();
    else if (name == "initial_ue_balance") c.initial_ue_balance = num();
    else if (name == "hash_levels") c.hash_levels.levels = to_double_list(key, v);
    else if (name == "scale_demand_min") c.scaling.demand_min = num();
    else if (name == "scale_demand_max") c.scaling.demand_max = num();
    else if (name == "scale_reputation_min") c.scaling.reputation_min = num();
    else if (name == "scale_reputation_max") c.scaling.reputation_max = num();
    else throw ConfigError("config: unknown key " + key);
    return true;
  }
  if (section == "mining") {
    if (name == "eta") c.mining.eta = num();
    else if (name == "kappa_s_per_kb") c.mining.kappa_s_per_kb = num();
    else if (name == "block_size_kb") c.mining.block_size_kb = num();
    else if (name == "first_miner_reward") c.mining.first_miner_reward = num();
    else if (name == "reward_per_kb") c.mining.reward_per_kb = num();
    else throw ConfigError("config: unknown key " + key);
    return true;
  }
  if (section == "gas") {
    if (name == "creation_trade_gas") c.gas.creation_trade_gas = static_cast<std::int64_t>(to_uint(key, v));
    else if (name == "trading_gas") c.gas.trading_gas = static_cast<std::int64_t>(to_uint(key, v));
    else if (name == "ether_per_gas") c.gas.ether_per_gas = num();
    else if (name == "usd_per_ether") c.gas.usd_per_ether = num();
    else throw ConfigError("config: unknown key " + key);
    return true;
  }
  return false;
}

}  // namespace detail

EnvConfig parse_env_config(std::istream& in, EnvConfig base) {
  for (const auto& [key, value] : bcmec::detail::read_key_values(in)) detail::apply_env_key(base, key, value);
  base.validate();
  return base;
}

void write_env_config(std::ostream& out, const EnvConfig& c) {
  out << "[env]\n"
      << "num_ues = " << c.num_ues << '\n'
      << "num_servers = " << c.num_servers << '\n'
      << "price_unit = " << format_double(c.price_unit) << '\n'
      << "total_network_hash = " << format_double(c.total_network_hash) << '\n'
      << "horizon = " << c.horizon << '\n'
      << "seed = " << c.rng_seed << '\n'
      << "w_reward = " << format_double(c.reward_weights.w_reward) << '\n'
      << "w_revenue = " << format_double(c.reward_weights.w_revenue) << '\n'
      << "w_latency = " << format_double(c.reward_weights.w_latency) << '\n'
      << "capacity_ghz = " << format_double(c.capacity_ghz) << '\n'
      << "server_capacity_ghz = " << format_double_list(c.server_capacity_ghz) << '\n'
      << "data_size_min_mb = " << format_double(c.data_size_min_mb) << '\n'
      << "data_size_max_mb = " << format_double(c.data_size_max_mb) << '\n'
      << "demand_min_gcycles = " << format_double(c.demand_min_gcycles) << '\n'
      << "demand_max_gcycles = " << format_double(c.demand_max_gcycles) << '\n'
      << "slack_factor = " << format_double(c.slack_factor) << '\n'
      << "reference_capacity_ghz = " << format_double(c.reference_capacity_ghz) << '\n'
      << "latency_scale = " << format_double(c.latency_scale) << '\n'
      << "reputation_window = " << c.reputation_window << '\n'
      << "initial_ue_balance = " << format_double(c.initial_ue_balance) << '\n'
      << "hash_levels = " << format_double_list(c.hash_levels.levels) << '\n'
      << "scale_demand_min = " << format_double(c.scaling.demand_min) << '\n'
      << "scale_demand_max = " << format_double(c.scaling.demand_max) << '\n'
      << "scale_reputation_min = " << format_double(c.scaling.reputation_min) << '\n'
      << "scale_reputation_max = " << format_double(c.scaling.reputation_max) << '\n'
      << "\n[mining]\n"
      << "eta = " << format_double(c.mining.eta) << '\n'
      << "kappa_s_per_kb = " << format_double(c.mining.kappa_s_per_kb) << '\n'
      << "block_size_kb = " << format_double(c.mining.block_size_kb) << '\n'
      << "first_miner_reward = " << format_double(c.mining.first_miner_reward) << '\n'
      << "reward_per_kb = " << format_double(c.mining.reward_per_kb) << '\n'
      << "\n[gas]\n"
      << "creation_trade_gas = " << c.gas.creation_trade_gas << '\n'
      << "trading_gas = " << c.gas.trading_gas << '\n'
      << "ether_per_gas = " << format_double(c.gas.ether_per_gas) << '\n'
      << "usd_per_ether = " << format_double(c.gas.usd_per_ether) << '\n';
}

}  // namespace bcmec::mec
