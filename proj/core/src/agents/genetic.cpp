#include "bcmec/agents/genetic.hpp"

#include <algorithm>
#include <limits>

#include "bcmec/errors.hpp"

namespace bcmec::agents {

namespace {

struct Individual {
  mdp::JointAction action;
  double fitness = -std::numeric_limits<double>::infinity();
};

mdp::JointAction random_action(const mdp::ActionSpace& space, Rng& rng) {
  mdp::JointAction action;
  for (std::size_t m = 0; m < space.num_servers; ++m) {
    action.decisions.push_back({rng.index(space.num_ues), rng.index(space.hash_levels.size())});
  }
  return action;
}

const Individual& tournament(const std::vector<Individual>& population, std::size_t size, Rng& rng) {
  const Individual* best = &population[rng.index(population.size())];
  for (std::size_t i = 1; i < size; ++i) {
    const Individual& challenger = population[rng.index(population.size())];
    if (challenger.fitness > best->fitness) best = &challenger;
  }
  return *best;
}

}  // namespace

mdp::JointAction repair(const mdp::ActionSpace& space, mdp::JointAction action, Rng& rng) {
  auto& genes = action.decisions;
  std::vector<std::uint8_t> taken(space.num_ues, 0);
  std::vector<std::size_t> duplicates;
  for (std::size_t m = 0; m < genes.size(); ++m) {
    genes[m].ue = std::min(genes[m].ue, space.num_ues - 1);
    genes[m].hash_level = std::min(genes[m].hash_level, space.hash_levels.size() - 1);
    if (taken[genes[m].ue]) {
      duplicates.push_back(m);
    } else {
      taken[genes[m].ue] = 1;
    }
  }
  for (std::size_t m : duplicates) {
    std::vector<std::size_t> free;
    for (std::size_t u = 0; u < space.num_ues; ++u) {
      if (!taken[u]) free.push_back(u);
    }
    if (free.empty()) throw InfeasibleAction("repair: more servers than UEs");
    genes[m].ue = free[rng.index(free.size())];
    taken[genes[m].ue] = 1;
  }

  // A nonzero level must stay strictly below the network total.
  for (auto& gene : genes) {
    while (gene.hash_level > 0 && space.hash_levels[gene.hash_level] != 0.0 &&
           !(space.hash_levels[gene.hash_level] < space.total_hash)) {
      --gene.hash_level;
    }
  }
  while (space.committed_hash(genes) > space.total_hash) {
    auto largest = std::max_element(genes.begin(), genes.end(), [](const auto& a, const auto& b) {
      return a.hash_level < b.hash_level;
    });
    if (largest->hash_level == 0) throw InfeasibleAction("repair: budget infeasible even at the lowest level");
    --largest->hash_level;
  }
  return action;
}

mdp::JointAction ga_optimize(const mdp::ActionSpace& space, const UtilityOracle& utility, const GaParams& params,
                             Rng& rng) {
  if (params.population == 0 || params.tournament_size == 0) {
    throw ConfigError("ga: population and tournament size must be positive");
  }
  std::vector<Individual> population(params.population);
  Individual best;
  auto evaluate = [&](Individual& ind) {
    ind.fitness = utility(ind.action);
    if (ind.fitness > best.fitness) best = ind;
  };
  for (auto& ind : population) {
    ind.action = repair(space, random_action(space, rng), rng);
    evaluate(ind);
  }

  for (std::size_t gen = 0; gen < params.generations; ++gen) {
    std::vector<Individual> next;
    next.reserve(params.population);
    next.push_back(best);  // elitism
    while (next.size() < params.population) {
      mdp::JointAction a = tournament(population, params.tournament_size, rng).action;
      mdp::JointAction b = tournament(population, params.tournament_size, rng).action;
      if (space.num_servers > 1 && rng.bernoulli(params.crossover_prob)) {
        const std::size_t cut = 1 + rng.index(space.num_servers - 1);
        for (std::size_t m = cut; m < space.num_servers; ++m) std::swap(a.decisions[m], b.decisions[m]);
      }
      for (auto* child : {&a, &b}) {
        for (auto& gene : child->decisions) {
          if (rng.bernoulli(params.mutation_prob)) gene.ue = rng.index(space.num_ues);
          if (rng.bernoulli(params.mutation_prob)) gene.hash_level = rng.index(space.hash_levels.size());
        }
        if (next.size() < params.population) {
          Individual ind;
          ind.action = repair(space, std::move(*child), rng);
          evaluate(ind);
          next.push_back(std::move(ind));
        }
      }
    }
    population = std::move(next);
  }
  return best.action;
}

}  // namespace bcmec::agents
