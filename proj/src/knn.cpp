#include "abcsg/knn.hpp"

#include <limits>

namespace abcsg {

MismatchTensor::MismatchTensor(std::size_t n_max, std::size_t size)
    : n_max_(n_max), size_(size), terms_(n_max * size * size, 0) {
    if (n_max == 0) throw std::invalid_argument("n_max must be >= 1");
}

ProfiledSequence make_profiled(SymbolicSequence seq, std::size_t n_max) {
    if (n_max == 0) throw std::invalid_argument("n_max must be >= 1");
    std::vector<NGramProfile> profiles;
    profiles.reserve(n_max);
    for (std::size_t n = 1; n <= n_max; ++n) profiles.push_back(extract_ngrams(seq, n));
    return ProfiledSequence{std::move(seq), std::move(profiles)};
}

double abc_sg_distance(const ProfiledSequence& s, const ProfiledSequence& t, std::span<const double> lambda) {
    if (lambda.size() > s.profiles.size() || lambda.size() > t.profiles.size()) {
        throw std::invalid_argument("lambda is longer than the cached profile depth");
    }
    double d = 0.0;
    for (std::size_t n = 1; n <= lambda.size(); ++n) {
        d += lambda[n - 1] * static_cast<double>(mismatch_term(s.profiles[n - 1], t.profiles[n - 1]));
    }
    return d;
}

MismatchTensor build_mismatch_tensor(std::span<const SymbolicSequence> sequences, std::size_t n_max,
                                     unsigned threads) {
    for (std::size_t i = 1; i < sequences.size(); ++i) {
        if (!(sequences[i].alphabet() == sequences[0].alphabet())) {
            throw std::invalid_argument("sequence " + std::to_string(i) + " uses alphabet \"" +
                                        sequences[i].alphabet().symbols() + "\" but sequence 0 uses \"" +
                                        sequences[0].alphabet().symbols() + "\"");
        }
    }
    const std::size_t size = sequences.size();
    std::vector<std::vector<NGramProfile>> cache(size);
    parallel_for(size, threads, [&](std::size_t i) {
        for (std::size_t n = 1; n <= n_max; ++n) cache[i].push_back(extract_ngrams(sequences[i], n));
    });

    MismatchTensor tensor(n_max, size);
    parallel_for(size, threads, [&](std::size_t i) {
        // Row i writes cells (i, j) and (j, i) for j > i only; no two rows touch the same cell.
        for (std::size_t j = i + 1; j < size; ++j) {
            for (std::size_t n = 1; n <= n_max; ++n) {
                const auto v = mismatch_term(cache[i][n - 1], cache[j][n - 1]);
                if (v > std::numeric_limits<std::int32_t>::max()) {
                    throw std::overflow_error("mismatch term does not fit in 32 bits");
                }
                tensor.set(n, i, j, static_cast<std::int32_t>(v));
            }
        }
    });
    return tensor;
}

double loocv_error(const MismatchTensor& tensor, std::span<const Label> labels, std::span<const double> lambda) {
    const std::size_t size = tensor.size();
    if (labels.size() != size) {
        throw std::invalid_argument("tensor has " + std::to_string(size) + " instances but " +
                                    std::to_string(labels.size()) + " labels were given");
    }
    if (size < 2) throw std::invalid_argument("leave-one-out needs at least two instances");
    if (lambda.empty() || lambda.size() > tensor.n_max()) {
        throw std::invalid_argument("lambda length must be in [1, n_max]");
    }
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < size; ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = i == 0 ? 1 : 0;
        for (std::size_t j = 0; j < size; ++j) {
            if (j == i) continue;
            const double d = tensor.distance(lambda, i, j);
            if (d < best) {
                best = d;
                arg = j;
            }
        }
        if (labels[arg] != labels[i]) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(size);
}

double loocv_error(const MismatchTensor& tensor, std::span<const Label> labels, const LambdaVector& lambda) {
    return loocv_error(tensor, labels, lambda.weights());
}

abc::Fitness make_fitness(std::shared_ptr<const MismatchTensor> tensor, std::vector<Label> labels) {
    if (!tensor) throw std::invalid_argument("make_fitness needs a tensor");
    if (labels.size() != tensor->size()) throw std::invalid_argument("tensor and labels differ in size");
    return [tensor = std::move(tensor), labels = std::move(labels)](std::span<const double> lambda) {
        return loocv_error(*tensor, labels, lambda);
    };
}

}  // namespace abcsg
