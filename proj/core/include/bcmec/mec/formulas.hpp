#pragma once

namespace bcmec::mec {

// Tokens charged for a task: price_unit * demand.
double service_cost(double cpu_demand_gcycles, double price_unit);

// Execution time of an assigned task, data_size * demand / capacity, with
// the data size acting as a dimensionless multiplier. Zero when not
// assigned.
double execution_latency(bool assigned, double data_size_mb, double cpu_demand_gcycles, double capacity_ghz);

// desired / actual latency; 1.0 before any task has been served.
double reputation_score(double desired_sum_s, double actual_sum_s);

}  // namespace bcmec::mec
