#include "abcsg/sax.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace abcsg {

TimeSeries::TimeSeries(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("time series must be non-empty");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw std::invalid_argument("time series sample " + std::to_string(i) + " is not finite");
        }
    }
}

PAAVector::PAAVector(std::vector<double> segments, std::size_t source_length)
    : segments_(std::move(segments)), source_length_(source_length) {
    if (segments_.empty() || segments_.size() > source_length_) {
        throw std::invalid_argument("PAA needs 1 <= segments <= source length");
    }
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("inverse normal CDF needs p in (0, 1)");

    // Acklam's rational approximation (relative error ~1.15e-9) ...
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // ... polished with one Halley step against the erfc-based CDF.
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

BreakpointTable::BreakpointTable(std::size_t alpha) : alpha_(alpha) {
    if (alpha < Alphabet::kMinSize || alpha > Alphabet::kMaxSize) {
        throw std::invalid_argument("alphabet size must be in [2, 26], got " + std::to_string(alpha));
    }
    cuts_.resize(alpha - 1);
    const double a = static_cast<double>(alpha);
    for (std::size_t i = 1; i < alpha; ++i) {
        // Fill from the symmetric pair so cuts[i] == -cuts[alpha - 2 - i] exactly.
        if (2 * i < alpha) {
            const double z = inverse_normal_cdf(static_cast<double>(i) / a);
            cuts_[i - 1] = z;
            cuts_[alpha - 1 - i] = -z;
        } else if (2 * i == alpha) {
            cuts_[i - 1] = 0.0;
        }
    }
}

std::size_t BreakpointTable::interval_of(double v) const noexcept {
    return static_cast<std::size_t>(std::upper_bound(cuts_.begin(), cuts_.end(), v) - cuts_.begin());
}

double BreakpointTable::cell(std::size_t i, std::size_t j) const {
    if (i >= alpha_ || j >= alpha_) throw std::out_of_range("symbol index outside the breakpoint table");
    const auto [lo, hi] = std::minmax(i, j);
    if (hi - lo <= 1) return 0.0;
    return cuts_[hi - 1] - cuts_[lo];
}

TimeSeries z_normalize(const TimeSeries& ts) {
    const auto v = ts.values();
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    const double sd = std::sqrt(var / n);

    std::vector<double> out(v.size(), 0.0);
    if (sd > 1e-12 * std::max(1.0, std::abs(mean))) {
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - mean) / sd;
    }
    return TimeSeries(std::move(out));
}

PAAVector paa(const TimeSeries& ts, std::size_t segments) {
    const std::size_t n = ts.size();
    if (segments == 0 || segments > n) {
        throw std::invalid_argument("PAA segment count " + std::to_string(segments) + " must be in [1, " +
                                    std::to_string(n) + "]");
    }
    std::vector<double> sums(segments, 0.0);
    std::vector<std::size_t> counts(segments, 0);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t s = j * segments / n;
        sums[s] += ts[j];
        ++counts[s];
    }
    for (std::size_t s = 0; s < segments; ++s) sums[s] /= static_cast<double>(counts[s]);
    return PAAVector(std::move(sums), n);
}

BreakpointTable make_breakpoints(std::size_t alpha) { return BreakpointTable(alpha); }

SymbolicSequence symbolize(const PAAVector& p, const BreakpointTable& bt, const Alphabet& alphabet) {
    if (alphabet.size() != bt.alpha()) {
        throw std::invalid_argument("alphabet size " + std::to_string(alphabet.size()) +
                                    " does not match breakpoint table size " + std::to_string(bt.alpha()));
    }
    std::string text;
    text.reserve(p.size());
    for (double v : p.segments()) text.push_back(alphabet.symbol(bt.interval_of(v)));
    return SymbolicSequence(std::move(text), alphabet);
}

SymbolicSequence sax_transform(const TimeSeries& ts, std::size_t segments, const BreakpointTable& bt,
                               const Alphabet& alphabet) {
    return symbolize(paa(z_normalize(ts), segments), bt, alphabet);
}

double mindist(const SymbolicSequence& a, const SymbolicSequence& b, const BreakpointTable& bt,
               std::size_t source_length) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("MINDIST needs equal-length strings (" + std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + ")");
    }
    if (a.empty()) throw std::invalid_argument("MINDIST needs non-empty strings");
    if (a.alphabet().size() != bt.alpha() || b.alphabet().size() != bt.alpha()) {
        throw std::invalid_argument("MINDIST strings must use the breakpoint table's alphabet size");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double c = bt.cell(a.index_at(i), b.index_at(i));
        sum += c * c;
    }
    return std::sqrt(static_cast<double>(source_length) / static_cast<double>(a.size()) * sum);
}

double paa_distance(const PAAVector& p, const PAAVector& q) {
    if (p.size() != q.size() || p.source_length() != q.source_length()) {
        throw std::invalid_argument("PAA distance needs vectors of identical shape");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) sum += (p[i] - q[i]) * (p[i] - q[i]);
    return std::sqrt(static_cast<double>(p.source_length()) / static_cast<double>(p.size()) * sum);
}

double euclidean_distance(const TimeSeries& x, const TimeSeries& y) {
    if (x.size() != y.size()) throw std::invalid_argument("Euclidean distance needs equal-length series");
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) sum += (x[i] - y[i]) * (x[i] - y[i]);
    return std::sqrt(sum);
}

}  // namespace abcsg
