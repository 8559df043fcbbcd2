#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bcmec::ledger {

struct GasSchedule {
  std::int64_t creation_trade_gas = 170948;
  std::int64_t trading_gas = 3904827;
  double ether_per_gas = 2e-8;
  double usd_per_ether = 195.0;

  void validate() const;
};

struct GasCost {
  double ether = 0.0;
  double usd = 0.0;
};

// Converts gas to displayed ether and USD figures. Ether is truncated to
// `ether_decimals` places and the USD figure is computed from that truncated
// ether value, then truncated to `usd_decimals` places.
GasCost gas_to_cost(std::int64_t gas, const GasSchedule& schedule, int ether_decimals = 4,
                    int usd_decimals = 4);

// Truncates toward zero at `decimals` places, tolerating binary
// representation error just below a decimal boundary.
double truncate_decimals(double value, int decimals);

}  // namespace bcmec::ledger
