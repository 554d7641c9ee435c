#pragma once

#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "abcsg/knn.hpp"
#include "abcsg/sax.hpp"

namespace abcsg {

// Malformed or inconsistent input data.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// UCR text format: one instance per line, class label first, then samples.
// Fields are separated by commas and/or whitespace; blank lines are skipped.
// Trailing NaN fields (variable-length padding) are dropped.
LabeledDataset<TimeSeries> parse_ucr(std::istream& in, std::string_view source = "<stream>");
LabeledDataset<TimeSeries> load_ucr(const std::filesystem::path& path);

// Class labels may be written as integers or reals ("2", "2.0", "2e0") but must be integral.
Label parse_label(std::string_view token);

}  // namespace abcsg
