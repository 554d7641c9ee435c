#include "abcsg/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace abcsg {

Alphabet::Alphabet(std::string symbols) : symbols_(std::move(symbols)) {
    if (symbols_.size() < kMinSize || symbols_.size() > kMaxSize) {
        throw std::invalid_argument("alphabet size must be in [2, 26], got " +
                                    std::to_string(symbols_.size()));
    }
    index_.fill(-1);
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        auto& slot = index_[static_cast<unsigned char>(symbols_[i])];
        if (slot >= 0) {
            throw std::invalid_argument(std::string("duplicate alphabet symbol '") + symbols_[i] + "'");
        }
        slot = static_cast<std::int16_t>(i);
    }
}

Alphabet Alphabet::letters(std::size_t size) {
    if (size < kMinSize || size > kMaxSize) {
        throw std::invalid_argument("alphabet size must be in [2, 26], got " + std::to_string(size));
    }
    std::string s(size, 'a');
    std::iota(s.begin(), s.end(), 'a');
    return Alphabet(std::move(s));
}

std::size_t Alphabet::index_of(char c) const {
    const auto idx = index_[static_cast<unsigned char>(c)];
    if (idx < 0) {
        throw std::invalid_argument(std::string("symbol '") + c + "' is not in alphabet \"" + symbols_ + "\"");
    }
    return static_cast<std::size_t>(idx);
}

SymbolicSequence::SymbolicSequence(std::string text, Alphabet alphabet)
    : text_(std::move(text)), alphabet_(std::move(alphabet)) {
    for (std::size_t i = 0; i < text_.size(); ++i) {
        if (!alphabet_.contains(text_[i])) {
            throw std::invalid_argument("symbol '" + std::string(1, text_[i]) + "' at position " +
                                        std::to_string(i) + " is not in alphabet \"" +
                                        alphabet_.symbols() + "\"");
        }
    }
}

SymbolicSequence SymbolicSequence::from_letters(std::string text) {
    return SymbolicSequence(std::move(text), Alphabet::letters(Alphabet::kMaxSize));
}

NGramProfile::NGramProfile(std::size_t n, std::vector<Entry> entries) : n_(n), entries_(std::move(entries)) {
    if (n_ == 0) throw std::invalid_argument("n-gram length must be positive");
    std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) { return a.gram < b.gram; });
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (e.gram.size() != n_) throw std::invalid_argument("n-gram key has wrong length");
        if (e.count < 1) throw std::invalid_argument("n-gram counts must be positive");
        if (i > 0 && entries_[i - 1].gram == e.gram) throw std::invalid_argument("duplicate n-gram key");
        total_ += e.count;
    }
}

std::int64_t NGramProfile::count(std::string_view gram) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), gram,
                               [](const Entry& e, std::string_view g) { return e.gram < g; });
    return (it != entries_.end() && it->gram == gram) ? it->count : 0;
}

LambdaVector::LambdaVector(std::vector<double> weights, double upper_bound)
    : weights_(std::move(weights)), upper_bound_(upper_bound) {
    if (weights_.empty()) throw std::invalid_argument("lambda vector must have at least one weight");
    if (!(upper_bound_ >= 0.0)) throw std::invalid_argument("lambda upper bound must be non-negative");
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        const double w = weights_[i];
        if (!std::isfinite(w) || w < 0.0 || w > upper_bound_) {
            throw std::invalid_argument("lambda_" + std::to_string(i + 1) + " = " + std::to_string(w) +
                                        " is outside [0, " + std::to_string(upper_bound_) + "]");
        }
    }
}

NGramProfile extract_ngrams(const SymbolicSequence& seq, std::size_t n) {
    if (n == 0) throw std::invalid_argument("n-gram length must be positive");
    std::vector<NGramProfile::Entry> entries;
    if (n <= seq.size()) {
        const auto text = seq.view();
        std::vector<std::string_view> grams;
        grams.reserve(text.size() - n + 1);
        for (std::size_t i = 0; i + n <= text.size(); ++i) grams.push_back(text.substr(i, n));
        std::sort(grams.begin(), grams.end());
        for (std::size_t i = 0; i < grams.size();) {
            std::size_t j = i;
            while (j < grams.size() && grams[j] == grams[i]) ++j;
            entries.push_back({std::string(grams[i]), static_cast<std::int64_t>(j - i)});
            i = j;
        }
    }
    return NGramProfile(n, std::move(entries));
}

std::int64_t common_gram_mass(const NGramProfile& p, const NGramProfile& q) {
    if (p.n() != q.n()) {
        throw std::invalid_argument("profiles have different n (" + std::to_string(p.n()) + " vs " +
                                    std::to_string(q.n()) + ")");
    }
    const auto a = p.entries();
    const auto b = q.entries();
    std::int64_t mass = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const int cmp = a[i].gram.compare(b[j].gram);
        if (cmp < 0) {
            ++i;
        } else if (cmp > 0) {
            ++j;
        } else {
            mass += std::min(a[i].count, b[j].count);
            ++i;
            ++j;
        }
    }
    return mass;
}

std::size_t g_boundary(std::size_t n, std::size_t length) {
    if (n == 0) throw std::invalid_argument("n must be positive");
    return n <= length ? n : length + 1;
}

std::int64_t mismatch_term(const NGramProfile& p, const NGramProfile& q) {
    // total = |S| - g(n, S) + 1 for any profile, so the bracket collapses to
    // total_p + total_q - 2 * mass.
    return p.total() + q.total() - 2 * common_gram_mass(p, q);
}

std::int64_t mismatch_term(const SymbolicSequence& s, const SymbolicSequence& t, std::size_t n) {
    const auto ls = static_cast<std::int64_t>(s.size());
    const auto lt = static_cast<std::int64_t>(t.size());
    const auto gs = static_cast<std::int64_t>(g_boundary(n, s.size()));
    const auto gt = static_cast<std::int64_t>(g_boundary(n, t.size()));
    const auto mass = common_gram_mass(extract_ngrams(s, n), extract_ngrams(t, n));
    return ls + lt - gs - gt + 2 - 2 * mass;
}

double abc_sg_distance(const SymbolicSequence& s, const SymbolicSequence& t, const LambdaVector& lambda) {
    double d = 0.0;
    for (std::size_t n = 1; n <= lambda.n_max(); ++n) {
        d += lambda[n - 1] * static_cast<double>(mismatch_term(s, t, n));
    }
    return d;
}

std::size_t edit_distance(const SymbolicSequence& s, const SymbolicSequence& t) {
    const auto a = s.view();
    const auto b = t.view();
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    std::iota(prev.begin(), prev.end(), std::size_t{0});
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t change = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, change});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

double eed(const SymbolicSequence& s, const SymbolicSequence& t, double lambda) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("EED lambda must be non-negative");
    const auto ls = static_cast<std::int64_t>(s.size());
    const auto lt = static_cast<std::int64_t>(t.size());
    const auto mass = common_gram_mass(extract_ngrams(s, 1), extract_ngrams(t, 1));
    return static_cast<double>(edit_distance(s, t)) + lambda * static_cast<double>(ls + lt - 2 * mass);
}

}  // namespace abcsg
