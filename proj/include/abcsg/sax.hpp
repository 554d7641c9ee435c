#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "abcsg/sequences.hpp"

namespace abcsg {

// Raw numeric samples. Non-empty and finite.
class TimeSeries {
public:
    explicit TimeSeries(std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

private:
    std::vector<double> values_;
};

// Segment means of a series of length source_length.
class PAAVector {
public:
    PAAVector(std::vector<double> segments, std::size_t source_length);

    std::size_t size() const noexcept { return segments_.size(); }
    std::size_t source_length() const noexcept { return source_length_; }
    std::span<const double> segments() const noexcept { return segments_; }
    double operator[](std::size_t i) const { return segments_[i]; }

private:
    std::vector<double> segments_;
    std::size_t source_length_;
};

// The alpha - 1 standard normal quantiles i/alpha that split the real line
// into alpha equiprobable intervals.
class BreakpointTable {
public:
    explicit BreakpointTable(std::size_t alpha);

    std::size_t alpha() const noexcept { return alpha_; }
    std::span<const double> cuts() const noexcept { return cuts_; }

    // Interval index of v: the number of cuts <= v, so a value sitting exactly
    // on a cut belongs to the interval above it.
    std::size_t interval_of(double v) const noexcept;

    // Lookup-table cell distance between two symbol indices.
    double cell(std::size_t i, std::size_t j) const;

private:
    std::size_t alpha_;
    std::vector<double> cuts_;
};

// Standard normal CDF and its inverse (|error| well below 1e-8 on (0, 1)).
double normal_cdf(double x);
double inverse_normal_cdf(double p);

// Zero mean, unit population standard deviation. A constant series maps to zeros.
TimeSeries z_normalize(const TimeSeries& ts);

// Segment means. When segments does not divide the length, sample j goes to
// segment floor(j * segments / length).
PAAVector paa(const TimeSeries& ts, std::size_t segments);

BreakpointTable make_breakpoints(std::size_t alpha);

SymbolicSequence symbolize(const PAAVector& p, const BreakpointTable& bt, const Alphabet& alphabet);

// normalize -> PAA -> symbolize in one call.
SymbolicSequence sax_transform(const TimeSeries& ts, std::size_t segments, const BreakpointTable& bt,
                               const Alphabet& alphabet);

double mindist(const SymbolicSequence& a, const SymbolicSequence& b, const BreakpointTable& bt,
               std::size_t source_length);

double paa_distance(const PAAVector& p, const PAAVector& q);

double euclidean_distance(const TimeSeries& x, const TimeSeries& y);

}  // namespace abcsg
