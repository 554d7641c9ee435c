#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace abcsg {

// Ordered set of symbols. Symbol order is the order of construction and is
// what SAX maps breakpoint intervals onto.
class Alphabet {
public:
    static constexpr std::size_t kMinSize = 2;
    static constexpr std::size_t kMaxSize = 26;

    explicit Alphabet(std::string symbols);

    // The first `size` lowercase letters, 'a'...
    static Alphabet letters(std::size_t size);

    std::size_t size() const noexcept { return symbols_.size(); }
    char symbol(std::size_t index) const { return symbols_.at(index); }
    const std::string& symbols() const noexcept { return symbols_; }

    bool contains(char c) const noexcept { return index_[static_cast<unsigned char>(c)] >= 0; }
    // Position of `c` in the ordering; throws std::invalid_argument for foreign symbols.
    std::size_t index_of(char c) const;

    friend bool operator==(const Alphabet& a, const Alphabet& b) noexcept {
        return a.symbols_ == b.symbols_;
    }

private:
    std::string symbols_;
    std::array<std::int16_t, 256> index_{};
};

// A finite string over an Alphabet. Every symbol is checked on construction.
class SymbolicSequence {
public:
    SymbolicSequence(std::string text, Alphabet alphabet);

    // Convenience for lowercase text: validated against the full a..z alphabet.
    static SymbolicSequence from_letters(std::string text);

    std::size_t size() const noexcept { return text_.size(); }
    bool empty() const noexcept { return text_.empty(); }
    std::string_view view() const noexcept { return text_; }
    const std::string& str() const noexcept { return text_; }
    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t index_at(std::size_t pos) const { return alphabet_.index_of(text_.at(pos)); }

    friend bool operator==(const SymbolicSequence& a, const SymbolicSequence& b) noexcept {
        return a.text_ == b.text_ && a.alphabet_ == b.alphabet_;
    }

private:
    std::string text_;
    Alphabet alphabet_;
};

// Frequency map of the length-n substrings of one sequence. Entries are kept
// sorted by gram so two profiles can be intersected with a linear merge.
class NGramProfile {
public:
    struct Entry {
        std::string gram;
        std::int64_t count;
        friend bool operator==(const Entry&, const Entry&) = default;
    };

    NGramProfile(std::size_t n, std::vector<Entry> entries);

    std::size_t n() const noexcept { return n_; }
    std::int64_t total() const noexcept { return total_; }
    std::span<const Entry> entries() const noexcept { return entries_; }
    bool empty() const noexcept { return entries_.empty(); }
    // Count of `gram`, zero when absent.
    std::int64_t count(std::string_view gram) const;

private:
    std::size_t n_;
    std::int64_t total_ = 0;
    std::vector<Entry> entries_;
};

// Weights of the n-gram orders 1..n_max, each in [0, upper_bound].
class LambdaVector {
public:
    static constexpr double kDefaultUpperBound = 2.0;

    explicit LambdaVector(std::vector<double> weights, double upper_bound = kDefaultUpperBound);

    std::size_t n_max() const noexcept { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_.at(i); }
    std::span<const double> weights() const noexcept { return weights_; }
    double upper_bound() const noexcept { return upper_bound_; }

private:
    std::vector<double> weights_;
    double upper_bound_;
};

NGramProfile extract_ngrams(const SymbolicSequence& seq, std::size_t n);

// Sum over shared grams of min(count_p, count_q). Both profiles must have the same n.
std::int64_t common_gram_mass(const NGramProfile& p, const NGramProfile& q);

// n when n <= length, otherwise length + 1.
std::size_t g_boundary(std::size_t n, std::size_t length);

// |s| + |t| - g(n,s) - g(n,t) + 2 - 2 * common mass. Equal to the L1 distance
// between the two n-gram frequency vectors.
std::int64_t mismatch_term(const SymbolicSequence& s, const SymbolicSequence& t, std::size_t n);
std::int64_t mismatch_term(const NGramProfile& p, const NGramProfile& q);

// Weighted sum of the mismatch terms for n = 1..lambda.n_max(), accumulated in
// ascending n. Orders beyond n_max carry zero weight.
double abc_sg_distance(const SymbolicSequence& s, const SymbolicSequence& t, const LambdaVector& lambda);

// Levenshtein distance with unit costs.
std::size_t edit_distance(const SymbolicSequence& s, const SymbolicSequence& t);

// Extended edit distance: ED plus lambda times the unigram mismatch.
double eed(const SymbolicSequence& s, const SymbolicSequence& t, double lambda);

}  // namespace abcsg
