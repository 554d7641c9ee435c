#include "abcsg/abc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace abcsg::abc {

void AbcConfig::validate() const {
    if (pop_size < 2) throw std::invalid_argument("pop_size must be >= 2");
    if (nr_cycles < 1) throw std::invalid_argument("nr_cycles must be >= 1");
    if (max_nr < 1) throw std::invalid_argument("max_nr must be >= 1");
    if (bounds.empty()) throw std::invalid_argument("at least one decision variable is required");
    for (std::size_t d = 0; d < bounds.size(); ++d) {
        const auto& b = bounds[d];
        if (!std::isfinite(b.low) || !std::isfinite(b.high) || !(b.low < b.high)) {
            throw std::invalid_argument("bounds of dimension " + std::to_string(d) + " must satisfy low < high");
        }
    }
}

AbcConfig AbcConfig::uniform_box(std::size_t nr_par, double low, double high) {
    AbcConfig cfg;
    cfg.bounds.assign(nr_par, Bounds{low, high});
    return cfg;
}

FitnessError::FitnessError(std::size_t cycle, std::size_t source, const std::string& what)
    : std::runtime_error("fitness evaluation failed (cycle " + std::to_string(cycle) + ", source " +
                         std::to_string(source) + "): " + what),
      cycle_(cycle),
      source_(source) {}

std::vector<double> perturb_position(std::span<const double> xi, std::span<const double> xk, std::size_t dim,
                                     double phi, std::span<const Bounds> bounds) {
    if (xi.size() != xk.size() || xi.size() != bounds.size() || dim >= xi.size()) {
        throw std::invalid_argument("perturb_position: inconsistent dimensions");
    }
    std::vector<double> v(xi.begin(), xi.end());
    v[dim] = std::clamp(xi[dim] + phi * (xi[dim] - xk[dim]), bounds[dim].low, bounds[dim].high);
    return v;
}

FoodSource greedy_select(const FoodSource& current, std::vector<double> candidate, double candidate_fitness,
                         std::size_t max_nr) {
    if (candidate_fitness < current.fitness) {
        return FoodSource{std::move(candidate), candidate_fitness, 0};
    }
    FoodSource kept = current;
    kept.trials = std::min(kept.trials + 1, max_nr);
    return kept;
}

double quality(double fitness) noexcept {
    return fitness >= 0.0 ? 1.0 / (1.0 + fitness) : 1.0 + std::abs(fitness);
}

std::vector<double> onlooker_probabilities(std::span<const FoodSource> sources) {
    std::vector<double> p(sources.size());
    double total = 0.0;
    for (std::size_t i = 0; i < sources.size(); ++i) {
        p[i] = quality(sources[i].fitness);
        total += p[i];
    }
    for (double& v : p) v /= total;
    return p;
}

Colony::Colony(AbcConfig cfg, Fitness fitness)
    : cfg_(std::move(cfg)), fitness_(std::move(fitness)), rng_(cfg_.seed) {
    cfg_.validate();
    if (!fitness_) throw std::invalid_argument("fitness function is empty");
    sources_.reserve(cfg_.pop_size);
    for (std::size_t i = 0; i < cfg_.pop_size; ++i) {
        auto x = random_position();
        const double f = evaluate(i, x);
        sources_.push_back(FoodSource{std::move(x), f, 0});
    }
    best_ = *std::min_element(sources_.begin(), sources_.end(),
                              [](const FoodSource& a, const FoodSource& b) { return a.fitness < b.fitness; });
    best_.trials = 0;
}

double Colony::evaluate(std::size_t source, std::span<const double> x) {
    double f;
    try {
        f = fitness_(x);
    } catch (const std::exception& e) {
        throw FitnessError(cycle_, source, e.what());
    }
    if (std::isnan(f)) throw FitnessError(cycle_, source, "fitness returned NaN");
    ++evaluations_;
    return f;
}

std::vector<double> Colony::random_position() {
    std::vector<double> x(cfg_.nr_par());
    for (std::size_t d = 0; d < x.size(); ++d) {
        std::uniform_real_distribution<double> u(cfg_.bounds[d].low, cfg_.bounds[d].high);
        x[d] = u(rng_);
    }
    return x;
}

std::vector<double> Colony::perturb(std::size_t i) {
    // Partner drawn from the pop_size - 1 other sources.
    std::uniform_int_distribution<std::size_t> pick(0, cfg_.pop_size - 2);
    std::size_t k = pick(rng_);
    if (k >= i) ++k;
    std::uniform_int_distribution<std::size_t> dim(0, cfg_.nr_par() - 1);
    const std::size_t j = dim(rng_);
    std::uniform_real_distribution<double> phi(-1.0, 1.0);
    return perturb_position(sources_[i].position, sources_[k].position, j, phi(rng_), cfg_.bounds);
}

void Colony::track_best(const FoodSource& s) {
    if (s.fitness < best_.fitness) {
        best_ = s;
        best_.trials = 0;
    }
}

void Colony::try_improve(std::size_t i) {
    auto candidate = perturb(i);
    const double f = evaluate(i, candidate);
    sources_[i] = greedy_select(sources_[i], std::move(candidate), f, cfg_.max_nr);
    track_best(sources_[i]);
}

void Colony::employed_phase() {
    for (std::size_t i = 0; i < sources_.size(); ++i) try_improve(i);
}

void Colony::onlooker_phase() {
    const auto p = onlooker_probabilities(sources_);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t n = 0; n < sources_.size(); ++n) {
        const double r = u(rng_);
        std::size_t chosen = sources_.size() - 1;
        double cumulative = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            cumulative += p[i];
            if (r < cumulative) {
                chosen = i;
                break;
            }
        }
        try_improve(chosen);
    }
}

std::size_t Colony::scout_phase() {
    // Exhausted sources all sit at max_nr (trials saturate), so the worst
    // offender is the exhausted source with the highest fitness.
    std::size_t worst = sources_.size();
    for (std::size_t i = 0; i < sources_.size(); ++i) {
        if (sources_[i].trials < cfg_.max_nr) continue;
        if (worst == sources_.size() || sources_[i].trials > sources_[worst].trials ||
            (sources_[i].trials == sources_[worst].trials && sources_[i].fitness > sources_[worst].fitness)) {
            worst = i;
        }
    }
    if (worst == sources_.size()) return 0;
    auto x = random_position();
    const double f = evaluate(worst, x);
    sources_[worst] = FoodSource{std::move(x), f, 0};
    track_best(sources_[worst]);
    return 1;
}

CycleRecord Colony::step() {
    ++cycle_;
    const std::size_t before = evaluations_;
    employed_phase();
    onlooker_phase();
    const std::size_t scouts = scout_phase();
    return CycleRecord{cycle_, best_.fitness, evaluations_ - before, scouts};
}

Colony init_colony(const AbcConfig& cfg, Fitness fitness) { return Colony(cfg, std::move(fitness)); }

AbcResult run(const AbcConfig& cfg, Fitness fitness) {
    Colony colony(cfg, std::move(fitness));
    AbcResult result;
    result.history.reserve(cfg.nr_cycles);
    for (std::size_t c = 0; c < cfg.nr_cycles; ++c) result.history.push_back(colony.step());
    result.best_position = colony.best().position;
    result.best_fitness = colony.best().fitness;
    result.evaluations = colony.evaluations();
    return result;
}

}  // namespace abcsg::abc
