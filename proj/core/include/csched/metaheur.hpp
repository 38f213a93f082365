#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "csched/solve.hpp"

namespace csched {

/// Shared knobs of the four population/annealing searches. Each technique
/// reads the fields relevant to it; budgets are counted in iterations so a
/// seed fully determines the outcome unless `time_budget` cuts a run short.
struct MhParams {
  std::uint64_t seed = 42;
  std::size_t iterations = 200;
  std::size_t population_size = 40;
  // GA
  double mutation_rate = 0.05;
  double crossover_rate = 0.9;
  // SA; the temperature applies to the relative fitness change and SA
  // performs iterations * population_size moves.
  double initial_temperature = 0.1;
  double cooling_rate = 0.999;
  // PSO
  double inertia = 0.7;
  double cognitive = 1.5;
  double social = 1.5;
  // ACO
  double evaporation_rate = 0.1;
  double pheromone_exponent = 1.0;
  double heuristic_exponent = 2.0;
  // Added to the objective once per violation; unset means
  // Problem::default_penalty().
  std::optional<double> infeasibility_penalty;
  std::optional<double> time_budget;
};

/// Throws Error(invalid_argument) when a rate leaves [0, 1], the temperature
/// is not positive or the population is smaller than two.
void validate_params(const MhParams& params);

/// Fitness as seen by every metaheuristic: engine objective plus the
/// penalty per feasibility violation.
struct Candidate {
  Assignment genes;
  double fitness = 0.0;
  std::size_t violations = 0;
};

Candidate evaluate_candidate(const Problem& problem, Assignment genes, double penalty);

/// Orders candidates by (fitness, genes) so reductions are independent of
/// evaluation order.
bool better(const Candidate& a, const Candidate& b);

/// All four return status=feasible with the best violation-free candidate,
/// status=timeout when the time budget ended the run (schedule attached if
/// one was found) or status=infeasible when no feasible candidate appeared.
/// SolveResult::explored_nodes counts fitness evaluations and
/// SolveResult::convergence holds the incumbent fitness per iteration.
SolveResult solve_ga(const Problem& problem, const MhParams& params = {});
SolveResult solve_sa(const Problem& problem, const MhParams& params = {});
SolveResult solve_pso(const Problem& problem, const MhParams& params = {});
SolveResult solve_aco(const Problem& problem, const MhParams& params = {});

}  // namespace csched
