#include "csched/metaheur.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "csched/error.hpp"
#include "csched/heuristics.hpp"

namespace csched {
namespace {

using Clock = std::chrono::steady_clock;

// Every population member draws from its own std::mt19937_64 stream, seeded
// with splitmix64(seed ^ splitmix64(stream)). Stream ids are documented per
// technique below so runs can be reproduced member by member.
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream) : engine_(splitmix64(seed ^ splitmix64(stream))) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }

 private:
  std::mt19937_64 engine_;
};

class Deadline {
 public:
  explicit Deadline(const std::optional<double>& budget) {
    if (budget) {
      at_ = Clock::now() +
            std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(*budget));
    }
  }
  bool passed() const { return at_ && Clock::now() >= *at_; }

 private:
  std::optional<Clock::time_point> at_;
};

// Tracks the best violation-free candidate and the evaluation count.
struct Search {
  const Problem& problem;
  double penalty;
  std::optional<Candidate> best_feasible = std::nullopt;
  std::uint64_t evaluations = 0;

  Candidate evaluate(Assignment genes) {
    ++evaluations;
    auto candidate = evaluate_candidate(problem, std::move(genes), penalty);
    if (candidate.violations == 0 && (!best_feasible || better(candidate, *best_feasible))) {
      best_feasible = candidate;
    }
    return candidate;
  }
};

double resolve_penalty(const Problem& problem, const MhParams& params) {
  return params.infeasibility_penalty ? *params.infeasibility_penalty : problem.default_penalty();
}

SolveResult conclude(const Problem& problem, std::string technique, const Search& search, bool timed_out,
                     Clock::time_point started, std::vector<double> trace) {
  SolveResult result;
  result.technique = std::move(technique);
  result.explored_nodes = search.evaluations;
  result.convergence = std::move(trace);
  if (search.best_feasible) {
    result.assignment = search.best_feasible->genes;
    result.schedule = build_schedule(problem, result.assignment);
    result.objective = result.schedule->objective;
  }
  if (timed_out) {
    result.status = SolveStatus::timeout;
    result.detail = "time budget exhausted";
  } else if (search.best_feasible) {
    result.status = SolveStatus::feasible;
  } else {
    result.status = SolveStatus::infeasible;
    result.detail = "no feasible candidate found within the iteration budget";
  }
  result.wall_time = std::chrono::duration<double>(Clock::now() - started).count();
  return result;
}

std::optional<SolveResult> reject_unplaceable(const Problem& problem, const char* technique,
                                              Clock::time_point started) {
  auto j = first_unplaceable_task(problem);
  if (!j) return std::nullopt;
  SolveResult result;
  result.technique = technique;
  result.status = SolveStatus::infeasible;
  result.detail = "task '" + problem.task(*j).id + "' has no feature-feasible node";
  result.wall_time = std::chrono::duration<double>(Clock::now() - started).count();
  return result;
}

std::size_t random_node(const Problem& problem, std::size_t j, Rng& rng) {
  auto nodes = problem.eligible_nodes(j);
  return nodes[rng.index(nodes.size())];
}

}  // namespace

void validate_params(const MhParams& params) {
  auto unit = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(Errc::invalid_argument, std::string(name) + " must lie in [0, 1]");
    }
  };
  unit(params.mutation_rate, "mutation_rate");
  unit(params.crossover_rate, "crossover_rate");
  unit(params.cooling_rate, "cooling_rate");
  unit(params.evaporation_rate, "evaporation_rate");
  if (!(params.initial_temperature > 0.0)) {
    throw Error(Errc::invalid_argument, "initial_temperature must be > 0");
  }
  if (params.population_size < 2) throw Error(Errc::invalid_argument, "population_size must be >= 2");
  if (params.iterations < 1) throw Error(Errc::invalid_argument, "iterations must be >= 1");
  if (params.infeasibility_penalty && !(*params.infeasibility_penalty >= 0.0)) {
    throw Error(Errc::invalid_argument, "infeasibility_penalty must be >= 0");
  }
  if (params.time_budget && !(*params.time_budget > 0.0)) {
    throw Error(Errc::invalid_argument, "time budget must be positive");
  }
}

Candidate evaluate_candidate(const Problem& problem, Assignment genes, double penalty) {
  Candidate candidate;
  const auto schedule = time_assignment(problem, genes);
  candidate.violations = check_feasibility(problem, genes).violations.size();
  candidate.fitness = schedule.objective + penalty * static_cast<double>(candidate.violations);
  candidate.genes = std::move(genes);
  return candidate;
}

bool better(const Candidate& a, const Candidate& b) {
  if (a.fitness != b.fitness) return a.fitness < b.fitness;
  return a.genes < b.genes;
}

// ------------------------------------------------------------------- GA
// Streams: member k of the initial population uses stream k; child slot k
// of generation g (g >= 1) uses stream g * population_size + k.

SolveResult solve_ga(const Problem& problem, const MhParams& params) {
  validate_params(params);
  const auto started = Clock::now();
  if (auto rejected = reject_unplaceable(problem, "ga", started)) return *rejected;

  const auto n = problem.task_count();
  const auto size = params.population_size;
  Search search{problem, resolve_penalty(problem, params)};
  const Deadline deadline(params.time_budget);

  std::vector<Candidate> population;
  population.reserve(size);
  for (std::size_t k = 0; k < size; ++k) {
    Rng rng(params.seed, k);
    Assignment genes(n);
    for (std::size_t j = 0; j < n; ++j) genes[j] = random_node(problem, j, rng);
    population.push_back(search.evaluate(std::move(genes)));
  }

  auto best_of = [](const std::vector<Candidate>& pop) {
    return std::min_element(pop.begin(), pop.end(), better);
  };
  std::vector<double> trace{best_of(population)->fitness};
  bool timed_out = false;

  for (std::size_t generation = 1; generation <= params.iterations; ++generation) {
    if (deadline.passed()) {
      timed_out = true;
      break;
    }
    std::vector<Candidate> next;
    next.reserve(size);
    next.push_back(*best_of(population));
    for (std::size_t k = 1; k < size; ++k) {
      Rng rng(params.seed, generation * size + k);
      auto tournament = [&]() -> const Candidate& {
        const auto& a = population[rng.index(size)];
        const auto& b = population[rng.index(size)];
        return better(b, a) ? b : a;
      };
      const auto& first = tournament();
      const auto& second = tournament();
      Assignment genes = first.genes;
      if (rng.uniform() < params.crossover_rate) {
        for (std::size_t j = 0; j < n; ++j) {
          if (rng.uniform() < 0.5) genes[j] = second.genes[j];
        }
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (rng.uniform() < params.mutation_rate) genes[j] = random_node(problem, j, rng);
      }
      next.push_back(search.evaluate(std::move(genes)));
    }
    population = std::move(next);
    trace.push_back(best_of(population)->fitness);
  }
  return conclude(problem, "ga", search, timed_out, started, std::move(trace));
}

// ------------------------------------------------------------------- SA
// Single stream 0. Starts from the OLB assignment (first eligible node per
// task when OLB cannot place everything).

SolveResult solve_sa(const Problem& problem, const MhParams& params) {
  validate_params(params);
  const auto started = Clock::now();
  if (auto rejected = reject_unplaceable(problem, "sa", started)) return *rejected;

  const auto n = problem.task_count();
  Search search{problem, resolve_penalty(problem, params)};
  const Deadline deadline(params.time_budget);
  Rng rng(params.seed, 0);

  Assignment start;
  if (auto olb = solve_olb(problem); olb.status == SolveStatus::feasible) {
    start = olb.assignment;
  } else {
    start.resize(n);
    for (std::size_t j = 0; j < n; ++j) start[j] = problem.eligible_nodes(j).front();
  }

  std::vector<std::size_t> movable;
  for (std::size_t j = 0; j < n; ++j) {
    if (problem.eligible_nodes(j).size() > 1) movable.push_back(j);
  }

  Candidate current = search.evaluate(std::move(start));
  Candidate best = current;
  std::vector<double> trace{best.fitness};
  double temperature = params.initial_temperature;
  bool timed_out = false;

  const std::size_t moves_per_iteration = params.population_size;
  for (std::size_t iteration = 1; iteration <= params.iterations && !movable.empty(); ++iteration) {
    if (deadline.passed()) {
      timed_out = true;
      break;
    }
    for (std::size_t m = 0; m < moves_per_iteration; ++m) {
      const auto j = movable[rng.index(movable.size())];
      auto nodes = problem.eligible_nodes(j);
      // Draw among the other nodes so every move changes the assignment.
      auto pick = rng.index(nodes.size() - 1);
      if (nodes[pick] == current.genes[j]) pick = nodes.size() - 1;
      Assignment genes = current.genes;
      genes[j] = nodes[pick];
      Candidate candidate = search.evaluate(std::move(genes));

      const double delta = candidate.fitness - current.fitness;
      const double scale = current.fitness > 0.0 ? current.fitness : 1.0;
      const double u = rng.uniform();
      if (delta <= 0.0 || u < std::exp(-(delta / scale) / temperature)) {
        current = std::move(candidate);
        if (better(current, best)) best = current;
      }
      temperature *= params.cooling_rate;
      if (!(temperature > 0.0)) temperature = std::numeric_limits<double>::min();
    }
    trace.push_back(best.fitness);
  }
  return conclude(problem, "sa", search, timed_out, started, std::move(trace));
}

// ------------------------------------------------------------------ PSO
// Random-key encoding: one key per (task, eligible node); a task decodes to
// the eligible node with the largest key (lowest id on ties). Particle k
// owns stream k for its whole life.

SolveResult solve_pso(const Problem& problem, const MhParams& params) {
  validate_params(params);
  const auto started = Clock::now();
  if (auto rejected = reject_unplaceable(problem, "pso", started)) return *rejected;

  const auto n = problem.task_count();
  const auto size = params.population_size;
  Search search{problem, resolve_penalty(problem, params)};
  const Deadline deadline(params.time_budget);

  std::vector<std::size_t> offset(n + 1, 0);
  for (std::size_t j = 0; j < n; ++j) offset[j + 1] = offset[j] + problem.eligible_nodes(j).size();
  const auto dims = offset[n];
  constexpr double kMaxVelocity = 0.5;

  auto decode = [&](const std::vector<double>& keys) {
    Assignment genes(n);
    for (std::size_t j = 0; j < n; ++j) {
      auto nodes = problem.eligible_nodes(j);
      std::size_t best = 0;
      for (std::size_t k = 1; k < nodes.size(); ++k) {
        if (keys[offset[j] + k] > keys[offset[j] + best]) best = k;
      }
      genes[j] = nodes[best];
    }
    return genes;
  };

  struct Particle {
    Rng rng;
    std::vector<double> position;
    std::vector<double> velocity;
    std::vector<double> best_position;
    Candidate best;
  };

  std::vector<Particle> swarm;
  swarm.reserve(size);
  for (std::size_t k = 0; k < size; ++k) {
    Particle particle{Rng(params.seed, k), std::vector<double>(dims), std::vector<double>(dims, 0.0), {}, {}};
    for (auto& x : particle.position) x = particle.rng.uniform();
    for (auto& v : particle.velocity) v = particle.rng.uniform(-0.1, 0.1);
    particle.best = search.evaluate(decode(particle.position));
    particle.best_position = particle.position;
    swarm.push_back(std::move(particle));
  }

  auto leader = [&]() {
    std::size_t best = 0;
    for (std::size_t k = 1; k < size; ++k) {
      if (better(swarm[k].best, swarm[best].best)) best = k;
    }
    return best;
  };
  std::size_t global = leader();
  std::vector<double> global_position = swarm[global].best_position;
  Candidate global_best = swarm[global].best;
  std::vector<double> trace{global_best.fitness};
  bool timed_out = false;

  for (std::size_t iteration = 1; iteration <= params.iterations; ++iteration) {
    if (deadline.passed()) {
      timed_out = true;
      break;
    }
    for (auto& particle : swarm) {
      for (std::size_t d = 0; d < dims; ++d) {
        const double r1 = particle.rng.uniform();
        const double r2 = particle.rng.uniform();
        double v = params.inertia * particle.velocity[d] +
                   params.cognitive * r1 * (particle.best_position[d] - particle.position[d]) +
                   params.social * r2 * (global_position[d] - particle.position[d]);
        v = std::clamp(v, -kMaxVelocity, kMaxVelocity);
        particle.velocity[d] = v;
        particle.position[d] = std::clamp(particle.position[d] + v, 0.0, 1.0);
      }
      Candidate candidate = search.evaluate(decode(particle.position));
      if (better(candidate, particle.best)) {
        particle.best = std::move(candidate);
        particle.best_position = particle.position;
      }
    }
    // Synchronous update: the leader changes only after the whole swarm moved.
    global = leader();
    if (better(swarm[global].best, global_best)) {
      global_best = swarm[global].best;
      global_position = swarm[global].best_position;
    }
    trace.push_back(global_best.fitness);
  }
  return conclude(problem, "pso", search, timed_out, started, std::move(trace));
}

// ------------------------------------------------------------------ ACO
// Ant a of iteration t (t >= 1) uses stream (t - 1) * population_size + a.
// Choice weight of node i for task j: pheromone^a * (min_eft / eft_i)^b over
// eligible nodes, where eft is the earliest finish given the ant's partial
// schedule. Only the iteration-best ant deposits, in proportion to how close
// it is to the best fitness seen so far.

SolveResult solve_aco(const Problem& problem, const MhParams& params) {
  validate_params(params);
  const auto started = Clock::now();
  if (auto rejected = reject_unplaceable(problem, "aco", started)) return *rejected;

  const auto n = problem.task_count();
  const auto ants = params.population_size;
  Search search{problem, resolve_penalty(problem, params)};
  const Deadline deadline(params.time_budget);
  constexpr double kMinPheromone = 1e-3;

  std::vector<std::vector<double>> pheromone(n);
  for (std::size_t j = 0; j < n; ++j) pheromone[j].assign(problem.eligible_nodes(j).size(), 1.0);

  std::optional<Candidate> best_ever;
  std::vector<double> trace;
  bool timed_out = false;
  std::vector<double> finish;
  std::vector<double> weight;

  for (std::size_t iteration = 1; iteration <= params.iterations; ++iteration) {
    if (deadline.passed()) {
      timed_out = true;
      break;
    }
    std::optional<Candidate> iteration_best;
    for (std::size_t a = 0; a < ants; ++a) {
      Rng rng(params.seed, (iteration - 1) * ants + a);
      ScheduleBuilder builder(problem);
      std::vector<double> load(problem.node_count(), 0.0);
      Assignment genes(n);
      for (auto j : problem.order()) {
        auto nodes = problem.eligible_nodes(j);
        finish.assign(nodes.size(), 0.0);
        weight.assign(nodes.size(), 0.0);
        double min_finish = kUnlimited;
        for (std::size_t k = 0; k < nodes.size(); ++k) {
          finish[k] = builder.earliest_finish(j, nodes[k]);
          min_finish = std::min(min_finish, finish[k]);
        }
        double total = 0.0;
        for (std::size_t k = 0; k < nodes.size(); ++k) {
          const auto i = nodes[k];
          if (problem.capacity_mode() == CapacityMode::aggregate &&
              load[i] + static_cast<double>(problem.task(j).cores) > static_cast<double>(problem.node(i).cores)) {
            continue;
          }
          const double eta = finish[k] > 0.0 ? std::pow(min_finish / finish[k], params.heuristic_exponent) : 1.0;
          weight[k] = std::pow(pheromone[j][k], params.pheromone_exponent) * eta;
          total += weight[k];
        }
        if (!(total > 0.0)) {
          // Nothing fits or every weight underflowed: fall back to uniform.
          std::fill(weight.begin(), weight.end(), 1.0);
          total = static_cast<double>(weight.size());
        }
        double target = rng.uniform() * total;
        std::size_t pick = 0;
        for (; pick + 1 < nodes.size(); ++pick) {
          if (target < weight[pick]) break;
          target -= weight[pick];
        }
        genes[j] = nodes[pick];
        load[genes[j]] += static_cast<double>(problem.task(j).cores);
        builder.place(j, genes[j]);
      }
      Candidate ant = search.evaluate(std::move(genes));
      if (!iteration_best || better(ant, *iteration_best)) iteration_best = std::move(ant);
    }
    if (!best_ever || better(*iteration_best, *best_ever)) best_ever = *iteration_best;

    const double deposit =
        iteration_best->fitness > 0.0 ? best_ever->fitness / iteration_best->fitness : 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      auto nodes = problem.eligible_nodes(j);
      for (std::size_t k = 0; k < nodes.size(); ++k) {
        double& tau = pheromone[j][k];
        tau *= 1.0 - params.evaporation_rate;
        if (nodes[k] == iteration_best->genes[j]) tau += deposit;
        tau = std::max(tau, kMinPheromone);
      }
    }
    trace.push_back(best_ever->fitness);
  }
  return conclude(problem, "aco", search, timed_out, started, std::move(trace));
}

}  // namespace csched
