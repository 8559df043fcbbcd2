#include "bcmec/ledger/gas.hpp"

#include <cmath>

#include "bcmec/errors.hpp"

namespace bcmec::ledger {

void GasSchedule::validate() const {
  if (creation_trade_gas <= 0 || trading_gas <= 0 || !(ether_per_gas > 0.0) || !(usd_per_ether > 0.0)) {
    throw ConfigError("gas schedule: all fields must be positive");
  }
}

double truncate_decimals(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  // 0.0034 * 195 evaluates to 0.66299999...; nudge by a relative 1e-9 so
  // representation error never drops a displayed digit.
  const double scaled = value * scale;
  return std::trunc(scaled + std::copysign(std::abs(scaled) * 1e-9, scaled)) / scale;
}

GasCost gas_to_cost(std::int64_t gas, const GasSchedule& schedule, int ether_decimals, int usd_decimals) {
  if (gas < 0) throw DomainError("gas_to_cost: gas must be non-negative");
  GasCost cost;
  cost.ether = truncate_decimals(static_cast<double>(gas) * schedule.ether_per_gas, ether_decimals);
  cost.usd = truncate_decimals(cost.ether * schedule.usd_per_ether, usd_decimals);
  return cost;
}

}  // namespace bcmec::ledger
