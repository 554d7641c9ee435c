#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "abcsg/abc.hpp"
#include "abcsg/parallel.hpp"
#include "abcsg/sequences.hpp"

namespace abcsg {

using Label = std::int64_t;

template <class T>
struct LabeledDataset {
    std::vector<Label> labels;
    std::vector<T> items;

    std::size_t size() const noexcept { return items.size(); }
    void add(Label label, T item) {
        labels.push_back(label);
        items.push_back(std::move(item));
    }
};

// Per-order mismatch terms for every pair of a symbolic dataset. The terms do
// not depend on lambda, so the ABC-SG distance under any weight vector is a
// weighted sum of stored integers.
class MismatchTensor {
public:
    MismatchTensor(std::size_t n_max, std::size_t size);

    std::size_t n_max() const noexcept { return n_max_; }
    std::size_t size() const noexcept { return size_; }

    // n is 1-based.
    std::int32_t term(std::size_t n, std::size_t i, std::size_t j) const {
        return terms_[((n - 1) * size_ + i) * size_ + j];
    }
    void set(std::size_t n, std::size_t i, std::size_t j, std::int32_t value) {
        terms_[((n - 1) * size_ + i) * size_ + j] = value;
        terms_[((n - 1) * size_ + j) * size_ + i] = value;
    }

    // sum_n lambda_n * term(n, i, j), ascending n; lambda may be shorter than n_max.
    double distance(std::span<const double> lambda, std::size_t i, std::size_t j) const {
        double d = 0.0;
        for (std::size_t n = 1; n <= lambda.size(); ++n) d += lambda[n - 1] * static_cast<double>(term(n, i, j));
        return d;
    }

private:
    std::size_t n_max_;
    std::size_t size_;
    std::vector<std::int32_t> terms_;
};

// A sequence with its n-gram profiles for n = 1..n_max precomputed.
struct ProfiledSequence {
    SymbolicSequence sequence;
    std::vector<NGramProfile> profiles;
};

ProfiledSequence make_profiled(SymbolicSequence seq, std::size_t n_max);

// Same value and summation order as abc_sg_distance, from cached profiles.
double abc_sg_distance(const ProfiledSequence& s, const ProfiledSequence& t, std::span<const double> lambda);

MismatchTensor build_mismatch_tensor(std::span<const SymbolicSequence> sequences, std::size_t n_max,
                                     unsigned threads = 1);

// Leave-one-out 1-NN error; ties go to the lowest index.
double loocv_error(const MismatchTensor& tensor, std::span<const Label> labels, std::span<const double> lambda);
double loocv_error(const MismatchTensor& tensor, std::span<const Label> labels, const LambdaVector& lambda);

// ABC fitness: lambda -> LOOCV error over the tensor.
abc::Fitness make_fitness(std::shared_ptr<const MismatchTensor> tensor, std::vector<Label> labels);

struct Classification {
    double error = 0.0;
    std::vector<Label> predictions;
    std::vector<std::size_t> neighbors;
};

template <class T>
using PairwiseDistance = std::function<double(const T&, const T&)>;

// 1-NN of every test item among the train items; ties go to the lowest train index.
template <class T>
Classification classify_test(const LabeledDataset<T>& train, const LabeledDataset<T>& test,
                             const PairwiseDistance<T>& distance, unsigned threads = 1) {
    if (train.size() == 0 || test.size() == 0) throw std::invalid_argument("train and test sets must be non-empty");
    if (train.labels.size() != train.size() || test.labels.size() != test.size()) {
        throw std::invalid_argument("dataset labels and items differ in length");
    }
    Classification out;
    out.predictions.resize(test.size());
    out.neighbors.resize(test.size());
    parallel_for(test.size(), threads, [&](std::size_t i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t j = 0; j < train.size(); ++j) {
            double d;
            try {
                d = distance(test.items[i], train.items[j]);
            } catch (const std::exception& e) {
                throw std::runtime_error("distance failed for test instance " + std::to_string(i) +
                                         " and train instance " + std::to_string(j) + ": " + e.what());
            }
            if (d < best) {
                best = d;
                arg = j;
            }
        }
        out.neighbors[i] = arg;
        out.predictions[i] = train.labels[arg];
    });
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < test.size(); ++i) wrong += out.predictions[i] != test.labels[i] ? 1 : 0;
    out.error = static_cast<double>(wrong) / static_cast<double>(test.size());
    return out;
}

// Leave-one-out 1-NN error under an arbitrary distance.
template <class T>
double loocv_error(const LabeledDataset<T>& data, const PairwiseDistance<T>& distance, unsigned threads = 1) {
    if (data.size() < 2) throw std::invalid_argument("leave-one-out needs at least two instances");
    std::vector<char> wrong(data.size(), 0);
    parallel_for(data.size(), threads, [&](std::size_t i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = i == 0 ? 1 : 0;
        for (std::size_t j = 0; j < data.size(); ++j) {
            if (j == i) continue;
            const double d = distance(data.items[i], data.items[j]);
            if (d < best) {
                best = d;
                arg = j;
            }
        }
        wrong[i] = data.labels[arg] != data.labels[i];
    });
    std::size_t count = 0;
    for (char w : wrong) count += w;
    return static_cast<double>(count) / static_cast<double>(data.size());
}

}  // namespace abcsg
