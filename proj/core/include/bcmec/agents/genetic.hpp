#pragma once

#include <cstddef>
#include <functional>

#include "bcmec/mdp/mdp.hpp"
#include "bcmec/rng.hpp"

namespace bcmec::agents {

struct GaParams {
  std::size_t population = 50;
  std::size_t generations = 40;
  std::size_t tournament_size = 3;
  double crossover_prob = 0.8;
  double mutation_prob = 0.05;  // per gene
};

// Single-timeslot utility of a feasible joint action.
using UtilityOracle = std::function<double(const mdp::JointAction&)>;

// Makes an action feasible: duplicate UEs move to random unused UEs, then
// hash levels step down (largest first) until the budget holds.
mdp::JointAction repair(const mdp::ActionSpace& space, mdp::JointAction action, Rng& rng);

// Myopic genetic search over joint actions. Genes are per-server
// (UE, hash level) pairs; tournament selection, one-point crossover at
// server boundaries, per-gene mutation, repair after every variation, and
// the best individual carried over each generation.
mdp::JointAction ga_optimize(const mdp::ActionSpace& space, const UtilityOracle& utility, const GaParams& params,
                             Rng& rng);

}  // namespace bcmec::agents
