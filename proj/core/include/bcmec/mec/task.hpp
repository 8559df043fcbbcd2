#pragma once

#include <vector>

#include "bcmec/rng.hpp"

namespace bcmec::mec {

struct EnvConfig;

struct TaskSpec {
  double data_size_mb = 1.0;
  double cpu_demand_gcycles = 1.0;
  double deadline_s = 1.0;
};

// Deadline given to a task: slack * nominal latency at the reference capacity.
double task_deadline(double data_size_mb, double cpu_demand_gcycles, double slack_factor,
                     double reference_capacity_ghz, double latency_scale = 1.0);

// One task per UE with uniform data size and demand over the configured
// ranges.
std::vector<TaskSpec> sample_tasks(Rng& rng, const EnvConfig& config);

}  // namespace bcmec::mec
