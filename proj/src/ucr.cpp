#include "abcsg/ucr.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <vector>

namespace abcsg {
namespace {

struct Token {
    std::string_view text;
    std::size_t column;  // 1-based
};

std::vector<Token> split_fields(std::string_view line) {
    std::vector<Token> out;
    auto is_sep = [](char c) { return c == ',' || c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; };
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_sep(line[i])) ++i;
        const std::size_t start = i;
        while (i < line.size() && !is_sep(line[i])) ++i;
        if (i > start) out.push_back({line.substr(start, i - start), start + 1});
    }
    return out;
}

std::optional<double> to_double(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace

Label parse_label(std::string_view token) {
    const auto v = to_double(token);
    if (!v || !std::isfinite(*v) || std::trunc(*v) != *v || std::abs(*v) > 9.0e15) {
        throw DataError("class label '" + std::string(token) + "' is not an integral number");
    }
    return static_cast<Label>(*v);
}

LabeledDataset<TimeSeries> parse_ucr(std::istream& in, std::string_view source) {
    LabeledDataset<TimeSeries> data;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](std::size_t column, const std::string& what) {
        throw DataError(std::string(source) + ": line " + std::to_string(line_no) + ", column " +
                        std::to_string(column) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++line_no;
        auto fields = split_fields(line);
        if (fields.empty()) continue;

        while (fields.size() > 1) {
            const auto v = to_double(fields.back().text);
            if (!v || !std::isnan(*v)) break;
            fields.pop_back();
        }
        if (fields.size() < 2) fail(fields.front().column, "a label and at least one sample are required");

        Label label = 0;
        try {
            label = parse_label(fields.front().text);
        } catch (const DataError& e) {
            fail(fields.front().column, e.what());
        }
        std::vector<double> samples;
        samples.reserve(fields.size() - 1);
        for (std::size_t f = 1; f < fields.size(); ++f) {
            const auto v = to_double(fields[f].text);
            if (!v) fail(fields[f].column, "non-numeric token '" + std::string(fields[f].text) + "'");
            if (!std::isfinite(*v)) fail(fields[f].column, "non-finite sample '" + std::string(fields[f].text) + "'");
            samples.push_back(*v);
        }
        data.add(label, TimeSeries(std::move(samples)));
    }
    if (in.bad()) throw DataError(std::string(source) + ": read error");
    return data;
}

LabeledDataset<TimeSeries> load_ucr(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    return parse_ucr(in, path.string());
}

}  // namespace abcsg
