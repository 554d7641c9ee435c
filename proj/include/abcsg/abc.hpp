#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace abcsg::abc {

struct Bounds {
    double low;
    double high;
};

struct AbcConfig {
    std::size_t pop_size = 20;
    std::size_t nr_cycles = 20;
    std::size_t max_nr = 10;
    // One entry per decision variable; nr_par is bounds.size().
    std::vector<Bounds> bounds{{0.0, 2.0}};
    std::uint64_t seed = 1;

    std::size_t nr_par() const noexcept { return bounds.size(); }
    // Throws std::invalid_argument when a field is out of range.
    void validate() const;

    static AbcConfig uniform_box(std::size_t nr_par, double low, double high);
};

// Minimized objective. Must be pure: same position, same value.
using Fitness = std::function<double(std::span<const double>)>;

struct FoodSource {
    std::vector<double> position;
    double fitness = 0.0;
    std::size_t trials = 0;
};

struct CycleRecord {
    std::size_t cycle = 0;
    double best_fitness = 0.0;
    std::size_t evaluations = 0;
    std::size_t scouts = 0;
};

struct AbcResult {
    std::vector<double> best_position;
    double best_fitness = 0.0;
    std::vector<CycleRecord> history;
    std::size_t evaluations = 0;
};

// Raised when the fitness function throws; carries where it happened.
class FitnessError : public std::runtime_error {
public:
    FitnessError(std::size_t cycle, std::size_t source, const std::string& what);
    std::size_t cycle() const noexcept { return cycle_; }
    std::size_t source() const noexcept { return source_; }

private:
    std::size_t cycle_;
    std::size_t source_;
};

// x_i + phi * (x_i - x_k) in dimension `dim`, clamped to that dimension's
// bounds; every other component is copied from x_i.
std::vector<double> perturb_position(std::span<const double> xi, std::span<const double> xk, std::size_t dim,
                                     double phi, std::span<const Bounds> bounds);

// Strict improvement replaces the source and resets its trials; anything else
// keeps it and bumps trials (saturating at max_nr).
FoodSource greedy_select(const FoodSource& current, std::vector<double> candidate, double candidate_fitness,
                         std::size_t max_nr);

// Nectar quality used for onlooker roulette when minimizing.
double quality(double fitness) noexcept;

// p_i = q_i / sum_k q_k with q = quality(fitness).
std::vector<double> onlooker_probabilities(std::span<const FoodSource> sources);

// Mutable optimizer state. Every random draw comes from one std::mt19937_64
// seeded from the config, in this order:
//   init:      for each source, for each dimension, a uniform draw in bounds
//   perturb:   partner k, then dimension j, then phi in [-1, 1)
//   onlooker:  a uniform [0, 1) roulette draw, then the perturb draws
//   scout:     for each dimension, a uniform draw in bounds
class Colony {
public:
    Colony(AbcConfig cfg, Fitness fitness);

    const AbcConfig& config() const noexcept { return cfg_; }
    std::span<const FoodSource> sources() const noexcept { return sources_; }
    const FoodSource& best() const noexcept { return best_; }
    std::size_t cycle() const noexcept { return cycle_; }
    std::size_t evaluations() const noexcept { return evaluations_; }

    // Draws a candidate for source i from a random partner k != i.
    std::vector<double> perturb(std::size_t i);

    void employed_phase();
    void onlooker_phase();
    // Replaces at most one exhausted source (trials >= max_nr); returns how many were replaced.
    std::size_t scout_phase();

    // One full cycle; returns its history record.
    CycleRecord step();

private:
    double evaluate(std::size_t source, std::span<const double> x);
    void try_improve(std::size_t i);
    std::vector<double> random_position();
    void track_best(const FoodSource& s);

    AbcConfig cfg_;
    Fitness fitness_;
    std::mt19937_64 rng_;
    std::vector<FoodSource> sources_;
    FoodSource best_;
    std::size_t cycle_ = 0;
    std::size_t evaluations_ = 0;
};

Colony init_colony(const AbcConfig& cfg, Fitness fitness);

AbcResult run(const AbcConfig& cfg, Fitness fitness);

}  // namespace abcsg::abc
