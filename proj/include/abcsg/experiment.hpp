#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "abcsg/abc.hpp"
#include "abcsg/knn.hpp"
#include "abcsg/sax.hpp"
#include "abcsg/ucr.hpp"

namespace abcsg::experiment {

// Bad command-line input (exit code 2).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr int kSchemaVersion = 1;

struct SaxConfig {
    std::size_t alpha = 3;
    // Compression ratio r: a series of length n becomes max(1, n / r) symbols.
    std::size_t ratio = 4;

    void validate() const;
    friend bool operator==(const SaxConfig&, const SaxConfig&) = default;
};

std::size_t segment_count(std::size_t length, std::size_t ratio);

LabeledDataset<SymbolicSequence> convert_dataset(const LabeledDataset<TimeSeries>& data, const SaxConfig& cfg);

// `<label>\t<symbols>\n` per instance.
void write_symbolic(std::ostream& out, const LabeledDataset<SymbolicSequence>& data);

struct AbcSettings {
    std::size_t pop_size = 20;
    std::size_t nr_cycles = 20;
    std::size_t max_nr = 10;
    double lambda_hi = LambdaVector::kDefaultUpperBound;
    // Independent ABC restarts with seeds seed, seed + 1, ...; the lowest
    // training error wins (first one on ties).
    std::size_t repeats = 1;

    friend bool operator==(const AbcSettings&, const AbcSettings&) = default;
};

struct TrainConfig {
    std::string dataset;
    SaxConfig sax;
    std::size_t n_max = 1;
    AbcSettings abc;
    std::uint64_t seed = 1;
    unsigned threads = 1;

    abc::AbcConfig abc_config(std::uint64_t run_seed) const;
};

// One row of the results: a trained lambda vector, optionally with its test
// error, or a DTW baseline. Serialized as the JSON artifact / record files.
struct RunRecord {
    std::string dataset;
    std::string measure;  // "abc-sg" or "dtw"
    std::optional<std::size_t> alpha;
    std::optional<std::size_t> ratio;
    std::optional<std::size_t> n_max;
    std::vector<double> lambda;
    std::optional<double> train_error;
    std::optional<double> test_error;
    std::optional<std::uint64_t> seed;
    // ABC settings and per-cycle best training error; present on trained records.
    std::optional<AbcSettings> abc;
    std::vector<double> history;
    std::optional<bool> normalized;  // DTW only

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

std::string to_json(const RunRecord& record);
RunRecord record_from_json(std::string_view text, std::string_view source = "<json>");
RunRecord load_record(const std::filesystem::path& path);
void save_record(const RunRecord& record, const std::filesystem::path& path);

// SAX-convert the training split and tune lambda by ABC against LOOCV error.
RunRecord train(const LabeledDataset<TimeSeries>& train_set, const TrainConfig& cfg);

// Refuses a trained record whose alpha or n_max disagrees with the requested
// configuration (UsageError).
void check_compatible(const RunRecord& trained, std::optional<std::size_t> alpha,
                      std::optional<std::size_t> n_max);

struct TestOutcome {
    RunRecord record;
    Classification classification;
};

// Classify the test split against the training split with a fixed lambda.
// Both splits are converted with the same alpha and ratio.
TestOutcome test(const LabeledDataset<TimeSeries>& train_set, const LabeledDataset<TimeSeries>& test_set,
                 RunRecord trained, unsigned threads);

// 1-NN DTW baseline on the raw series, z-normalized unless `normalize` is false.
TestOutcome dtw_baseline(const LabeledDataset<TimeSeries>& train_set, const LabeledDataset<TimeSeries>& test_set,
                         std::string dataset, bool normalize, unsigned threads);

struct DistOptions {
    std::vector<double> lambda;
    std::optional<std::size_t> alpha;
    std::optional<std::size_t> length;
    std::size_t ratio = 4;
};

// Ad-hoc distance between two inputs: symbol strings for ed, eed, abc-sg and
// mindist; comma-separated numbers for dtw.
double compute_distance(std::string_view measure, std::string_view a, std::string_view b,
                        const DistOptions& opts);

// Comma-separated decimals. Throws UsageError on malformed input.
std::vector<double> parse_lambda_list(std::string_view text);

// Orders records by (dataset, measure, alpha, n) and drops exact duplicates.
// Two different records for the same key raise DataError naming both sources.
std::vector<RunRecord> merge_records(const std::vector<std::pair<std::string, RunRecord>>& sourced);

std::string render_markdown(const std::vector<RunRecord>& records);
std::string render_csv(const std::vector<RunRecord>& records);
std::vector<RunRecord> parse_csv(std::string_view text);

// "ECG200_TRAIN.txt" -> "ECG200".
std::string dataset_name_from_path(const std::filesystem::path& path);

// Shortest decimal that reads back to the same double.
std::string format_double(double v);

}  // namespace abcsg::experiment
