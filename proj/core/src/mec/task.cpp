#include "bcmec/mec/task.hpp"

#include "bcmec/mec/config.hpp"

namespace bcmec::mec {

double task_deadline(double data_size_mb, double cpu_demand_gcycles, double slack_factor,
                     double reference_capacity_ghz, double latency_scale) {
  return slack_factor * latency_scale * data_size_mb * cpu_demand_gcycles / reference_capacity_ghz;
}

std::vector<TaskSpec> sample_tasks(Rng& rng, const EnvConfig& config) {
  std::vector<TaskSpec> tasks(config.num_ues);
  for (auto& task : tasks) {
    task.data_size_mb = rng.uniform(config.data_size_min_mb, config.data_size_max_mb);
    task.cpu_demand_gcycles = rng.uniform(config.demand_min_gcycles, config.demand_max_gcycles);
    task.deadline_s = task_deadline(task.data_size_mb, task.cpu_demand_gcycles, config.slack_factor,
                                    config.reference_capacity_ghz, config.latency_scale);
  }
  return tasks;
}

}  // namespace bcmec::mec
