#include "bcmec/mec/formulas.hpp"

#include "bcmec/errors.hpp"

namespace bcmec::mec {

double service_cost(double cpu_demand_gcycles, double price_unit) {
  if (!(cpu_demand_gcycles > 0.0) || !(price_unit > 0.0)) {
    throw DomainError("service_cost: demand and price must be positive");
  }
  return price_unit * cpu_demand_gcycles;
}

double execution_latency(bool assigned, double data_size_mb, double cpu_demand_gcycles, double capacity_ghz) {
  if (!(capacity_ghz > 0.0)) throw DomainError("execution_latency: capacity must be positive");
  if (!assigned) return 0.0;
  return data_size_mb * cpu_demand_gcycles / capacity_ghz;
}

double reputation_score(double desired_sum_s, double actual_sum_s) {
  if (!(desired_sum_s >= 0.0) || !(actual_sum_s >= 0.0)) {
    throw DomainError("reputation_score: latency sums must be non-negative");
  }
  if (actual_sum_s == 0.0) return 1.0;
  return desired_sum_s / actual_sum_s;
}

}  // namespace bcmec::mec
