#include "abcsg/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "abcsg/dtw.hpp"
#include "json.hpp"

namespace abcsg::experiment {
namespace {

using Json = nlohmann::ordered_json;

template <class F>
auto stage(std::string_view name, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const DataError& e) {
        throw DataError("stage '" + std::string(name) + "': " + e.what());
    } catch (const std::invalid_argument& e) {
        throw DataError("stage '" + std::string(name) + "': " + e.what());
    } catch (const abc::FitnessError& e) {
        throw DataError("stage '" + std::string(name) + "': " + e.what());
    }
}

std::optional<double> parse_double(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = text.find(sep, start);
        out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string lambda_text(const std::vector<double>& lambda, bool compact) {
    std::string out;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        if (i) out += ' ';
        if (compact) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.5g", lambda[i]);
            out += buf;
        } else {
            out += format_double(lambda[i]);
        }
    }
    return out;
}

template <class T>
Json opt_json(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

template <class T>
std::optional<T> opt_get(const Json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

using RecordKey = std::tuple<std::string, std::string, std::size_t, std::size_t>;

RecordKey key_of(const RunRecord& r) {
    return {r.dataset, r.measure, r.alpha.value_or(0), r.n_max.value_or(0)};
}

std::string describe(const RecordKey& k) {
    const auto& [dataset, measure, alpha, n] = k;
    std::string s = dataset + "/" + measure;
    if (alpha) s += " alpha=" + std::to_string(alpha);
    if (n) s += " n=" + std::to_string(n);
    return s;
}

}  // namespace

void SaxConfig::validate() const {
    if (alpha < Alphabet::kMinSize || alpha > Alphabet::kMaxSize) {
        throw UsageError("alphabet size must be in [2, 26], got " + std::to_string(alpha));
    }
    if (ratio < 1) throw UsageError("compression ratio must be >= 1");
}

std::size_t segment_count(std::size_t length, std::size_t ratio) {
    if (ratio == 0) throw std::invalid_argument("compression ratio must be >= 1");
    return std::max<std::size_t>(1, length / ratio);
}

LabeledDataset<SymbolicSequence> convert_dataset(const LabeledDataset<TimeSeries>& data, const SaxConfig& cfg) {
    cfg.validate();
    const BreakpointTable bt(cfg.alpha);
    const auto alphabet = Alphabet::letters(cfg.alpha);
    LabeledDataset<SymbolicSequence> out;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& ts = data.items[i];
        out.add(data.labels[i], sax_transform(ts, segment_count(ts.size(), cfg.ratio), bt, alphabet));
    }
    return out;
}

void write_symbolic(std::ostream& out, const LabeledDataset<SymbolicSequence>& data) {
    for (std::size_t i = 0; i < data.size(); ++i) out << data.labels[i] << '\t' << data.items[i].str() << '\n';
}

abc::AbcConfig TrainConfig::abc_config(std::uint64_t run_seed) const {
    abc::AbcConfig cfg = abc::AbcConfig::uniform_box(n_max, 0.0, abc.lambda_hi);
    cfg.pop_size = abc.pop_size;
    cfg.nr_cycles = abc.nr_cycles;
    cfg.max_nr = abc.max_nr;
    cfg.seed = run_seed;
    return cfg;
}

std::string to_json(const RunRecord& r) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["dataset"] = r.dataset;
    j["measure"] = r.measure;
    j["alpha"] = opt_json(r.alpha);
    j["ratio"] = opt_json(r.ratio);
    j["n_max"] = opt_json(r.n_max);
    j["lambda"] = r.lambda;
    j["train_error"] = opt_json(r.train_error);
    j["test_error"] = opt_json(r.test_error);
    j["seed"] = opt_json(r.seed);
    if (r.abc) {
        j["abc_config"] = {{"pop_size", r.abc->pop_size},
                           {"nr_cycles", r.abc->nr_cycles},
                           {"max_nr", r.abc->max_nr},
                           {"lambda_hi", r.abc->lambda_hi},
                           {"repeats", r.abc->repeats}};
    } else {
        j["abc_config"] = nullptr;
    }
    j["history"] = r.history;
    if (r.normalized) j["normalized"] = *r.normalized;
    return j.dump(2) + "\n";
}

RunRecord record_from_json(std::string_view text, std::string_view source) {
    const std::string where(source);
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw DataError(where + ": invalid JSON: " + e.what());
    }
    try {
        if (!j.is_object()) throw DataError("top level is not an object");
        const int version = j.at("schema_version").get<int>();
        if (version != kSchemaVersion) {
            throw DataError("unsupported schema_version " + std::to_string(version));
        }
        RunRecord r;
        r.dataset = j.at("dataset").get<std::string>();
        r.measure = j.at("measure").get<std::string>();
        if (r.measure != "abc-sg" && r.measure != "dtw") throw DataError("unknown measure '" + r.measure + "'");
        r.alpha = opt_get<std::size_t>(j, "alpha");
        r.ratio = opt_get<std::size_t>(j, "ratio");
        r.n_max = opt_get<std::size_t>(j, "n_max");
        r.lambda = j.value("lambda", std::vector<double>{});
        r.train_error = opt_get<double>(j, "train_error");
        r.test_error = opt_get<double>(j, "test_error");
        r.seed = opt_get<std::uint64_t>(j, "seed");
        if (j.contains("abc_config") && !j.at("abc_config").is_null()) {
            const auto& a = j.at("abc_config");
            r.abc = AbcSettings{a.at("pop_size").get<std::size_t>(), a.at("nr_cycles").get<std::size_t>(),
                                a.at("max_nr").get<std::size_t>(), a.at("lambda_hi").get<double>(),
                                a.value("repeats", std::size_t{1})};
        }
        r.history = j.value("history", std::vector<double>{});
        r.normalized = opt_get<bool>(j, "normalized");
        if (r.measure == "abc-sg" && r.n_max && r.lambda.size() != *r.n_max) {
            throw DataError("lambda has " + std::to_string(r.lambda.size()) + " entries but n_max is " +
                            std::to_string(*r.n_max));
        }
        return r;
    } catch (const DataError& e) {
        throw DataError(where + ": " + e.what());
    } catch (const Json::exception& e) {
        throw DataError(where + ": " + e.what());
    }
}

RunRecord load_record(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return record_from_json(buf.str(), path.string());
}

void save_record(const RunRecord& record, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << to_json(record);
    if (!out) throw DataError("write failed for '" + path.string() + "'");
}

RunRecord train(const LabeledDataset<TimeSeries>& train_set, const TrainConfig& cfg) {
    if (cfg.n_max < 1) throw UsageError("n-gram depth must be >= 1");
    if (cfg.abc.repeats < 1) throw UsageError("repeat count must be >= 1");
    cfg.sax.validate();
    // Fail on a bad ABC configuration before any expensive work.
    try {
        cfg.abc_config(cfg.seed).validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    const auto symbolic = stage("convert", [&] { return convert_dataset(train_set, cfg.sax); });
    if (symbolic.size() < 2) throw DataError("stage 'convert': training set needs at least two instances");
    const auto tensor = stage("tensor", [&] {
        return std::make_shared<const MismatchTensor>(build_mismatch_tensor(symbolic.items, cfg.n_max, cfg.threads));
    });
    const auto fitness = make_fitness(tensor, symbolic.labels);

    std::optional<abc::AbcResult> best;
    std::uint64_t best_seed = cfg.seed;
    for (std::size_t r = 0; r < cfg.abc.repeats; ++r) {
        const std::uint64_t run_seed = cfg.seed + r;
        auto result = stage("optimize", [&] { return abc::run(cfg.abc_config(run_seed), fitness); });
        if (!best || result.best_fitness < best->best_fitness) {
            best = std::move(result);
            best_seed = run_seed;
        }
    }

    RunRecord rec;
    rec.dataset = cfg.dataset;
    rec.measure = "abc-sg";
    rec.alpha = cfg.sax.alpha;
    rec.ratio = cfg.sax.ratio;
    rec.n_max = cfg.n_max;
    rec.lambda = best->best_position;
    rec.train_error = best->best_fitness;
    rec.seed = best_seed;
    rec.abc = cfg.abc;
    rec.history.reserve(best->history.size());
    for (const auto& h : best->history) rec.history.push_back(h.best_fitness);
    return rec;
}

void check_compatible(const RunRecord& trained, std::optional<std::size_t> alpha, std::optional<std::size_t> n_max) {
    if (trained.measure != "abc-sg") throw UsageError("record for '" + trained.dataset + "' is not an abc-sg record");
    if (alpha && trained.alpha && *alpha != *trained.alpha) {
        throw UsageError("alphabet size mismatch: artifact was trained with alpha=" + std::to_string(*trained.alpha) +
                         " but alpha=" + std::to_string(*alpha) + " was requested");
    }
    if (n_max && trained.lambda.size() != *n_max) {
        throw UsageError("n-gram depth mismatch: artifact lambda has " + std::to_string(trained.lambda.size()) +
                         " weights but --ngrams " + std::to_string(*n_max) + " was requested");
    }
}

TestOutcome test(const LabeledDataset<TimeSeries>& train_set, const LabeledDataset<TimeSeries>& test_set,
                 RunRecord trained, unsigned threads) {
    check_compatible(trained, std::nullopt, std::nullopt);
    if (!trained.alpha) throw DataError("record for '" + trained.dataset + "' has no alphabet size");
    const SaxConfig sax{*trained.alpha, trained.ratio.value_or(4)};
    const std::size_t n_max = trained.lambda.size();
    if (trained.n_max && *trained.n_max != n_max) throw DataError("record lambda length disagrees with n_max");
    const double hi = trained.abc ? trained.abc->lambda_hi : std::numeric_limits<double>::infinity();
    const auto lambda = stage("lambda", [&] { return LambdaVector(trained.lambda, hi); });

    auto profile_all = [&](const LabeledDataset<TimeSeries>& data) {
        const auto symbolic = convert_dataset(data, sax);
        LabeledDataset<ProfiledSequence> out;
        for (std::size_t i = 0; i < symbolic.size(); ++i) {
            out.add(symbolic.labels[i], make_profiled(symbolic.items[i], n_max));
        }
        return out;
    };
    const auto train_p = stage("convert", [&] { return profile_all(train_set); });
    const auto test_p = stage("convert", [&] { return profile_all(test_set); });

    const PairwiseDistance<ProfiledSequence> dist = [&](const ProfiledSequence& a, const ProfiledSequence& b) {
        return abc_sg_distance(a, b, lambda.weights());
    };
    auto cls = stage("classify", [&] { return classify_test(train_p, test_p, dist, threads); });

    trained.alpha = sax.alpha;
    trained.ratio = sax.ratio;
    trained.n_max = n_max;
    trained.test_error = cls.error;
    return TestOutcome{std::move(trained), std::move(cls)};
}

TestOutcome dtw_baseline(const LabeledDataset<TimeSeries>& train_set, const LabeledDataset<TimeSeries>& test_set,
                         std::string dataset, bool normalize, unsigned threads) {
    auto prepare = [&](const LabeledDataset<TimeSeries>& data) {
        if (!normalize) return data;
        LabeledDataset<TimeSeries> out;
        for (std::size_t i = 0; i < data.size(); ++i) out.add(data.labels[i], z_normalize(data.items[i]));
        return out;
    };
    const auto train_n = prepare(train_set);
    const auto test_n = prepare(test_set);
    const PairwiseDistance<TimeSeries> dist = [](const TimeSeries& a, const TimeSeries& b) {
        return dtw_distance(a, b);
    };
    auto cls = stage("classify", [&] { return classify_test(train_n, test_n, dist, threads); });

    RunRecord rec;
    rec.dataset = std::move(dataset);
    rec.measure = "dtw";
    rec.test_error = cls.error;
    rec.normalized = normalize;
    return TestOutcome{std::move(rec), std::move(cls)};
}

std::vector<double> parse_lambda_list(std::string_view text) {
    std::vector<double> out;
    for (auto field : split(text, ',')) {
        const auto v = parse_double(field);
        if (!v || !std::isfinite(*v)) throw UsageError("malformed lambda list '" + std::string(text) + "'");
        out.push_back(*v);
    }
    return out;
}

double compute_distance(std::string_view measure, std::string_view a, std::string_view b, const DistOptions& opts) {
    auto symbols = [&](std::string_view s) {
        const auto alphabet = Alphabet::letters(opts.alpha.value_or(Alphabet::kMaxSize));
        try {
            return SymbolicSequence(std::string(s), alphabet);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    };
    auto numbers = [&](std::string_view s) {
        std::vector<double> v;
        for (auto field : split(s, ',')) {
            const auto x = parse_double(field);
            if (!x) throw UsageError("malformed number list '" + std::string(s) + "'");
            v.push_back(*x);
        }
        try {
            return TimeSeries(std::move(v));
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    };
    auto as_lambda = [&]() {
        try {
            return LambdaVector(opts.lambda, std::numeric_limits<double>::infinity());
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    };

    if (measure == "ed") return static_cast<double>(edit_distance(symbols(a), symbols(b)));
    if (measure == "eed") {
        if (opts.lambda.size() != 1) throw UsageError("eed needs exactly one --lambda value");
        return eed(symbols(a), symbols(b), as_lambda()[0]);
    }
    if (measure == "abc-sg") {
        if (opts.lambda.empty()) throw UsageError("abc-sg needs --lambda");
        return abc_sg_distance(symbols(a), symbols(b), as_lambda());
    }
    if (measure == "dtw") return dtw_distance(numbers(a), numbers(b));
    if (measure == "mindist") {
        if (!opts.alpha) throw UsageError("mindist needs --alpha");
        const auto sa = symbols(a);
        const auto sb = symbols(b);
        if (sa.size() != sb.size()) throw UsageError("mindist needs equal-length strings");
        const std::size_t n = opts.length.value_or(sa.size() * opts.ratio);
        return mindist(sa, sb, BreakpointTable(*opts.alpha), n);
    }
    throw UsageError("unknown measure '" + std::string(measure) + "' (expected ed, eed, abc-sg, dtw or mindist)");
}

std::vector<RunRecord> merge_records(const std::vector<std::pair<std::string, RunRecord>>& sourced) {
    std::map<RecordKey, std::pair<std::string, RunRecord>> by_key;
    for (const auto& [src, rec] : sourced) {
        const auto key = key_of(rec);
        auto [it, inserted] = by_key.emplace(key, std::make_pair(src, rec));
        if (!inserted && !(it->second.second == rec)) {
            throw DataError("conflicting records for " + describe(key) + ": '" + it->second.first + "' and '" + src +
                            "'");
        }
    }
    std::vector<RunRecord> out;
    out.reserve(by_key.size());
    for (auto& [key, value] : by_key) out.push_back(value.second);
    return out;
}

std::string render_markdown(const std::vector<RunRecord>& records) {
    std::map<std::string, std::vector<const RunRecord*>> by_dataset;
    for (const auto& r : records) by_dataset[r.dataset].push_back(&r);

    std::ostringstream md;
    md << "## Classification error\n";
    for (const auto& [dataset, recs] : by_dataset) {
        std::set<std::size_t> alphas, ns;
        std::map<std::pair<std::size_t, std::size_t>, const RunRecord*> cells;
        const RunRecord* dtw = nullptr;
        for (const auto* r : recs) {
            if (r->measure == "dtw") {
                dtw = r;
            } else {
                alphas.insert(r->alpha.value_or(0));
                ns.insert(r->n_max.value_or(r->lambda.size()));
                cells[{r->alpha.value_or(0), r->n_max.value_or(r->lambda.size())}] = r;
            }
        }
        md << "\n### " << dataset << "\n\n| alpha |";
        for (auto n : ns) md << " ABC-SG n=" << n << " |";
        md << " DTW |\n|---|";
        for (std::size_t i = 0; i < ns.size(); ++i) md << "---|";
        md << "---|\n";
        const std::string dtw_cell = dtw && dtw->test_error ? fixed(*dtw->test_error, 3) : "-";
        if (alphas.empty()) md << "| - | " << dtw_cell << " |\n";
        bool first = true;
        for (auto a : alphas) {
            md << "| " << a << " |";
            for (auto n : ns) {
                const auto it = cells.find({a, n});
                md << ' ' << (it != cells.end() && it->second->test_error ? fixed(*it->second->test_error, 3) : "-")
                   << " |";
            }
            md << ' ' << (first ? dtw_cell : "") << " |\n";
            first = false;
        }
    }

    md << "\n## Optimized lambda\n\n| dataset | alpha | n-gram | lambda | train error |\n|---|---|---|---|---|\n";
    for (const auto& r : records) {
        if (r.measure != "abc-sg") continue;
        md << "| " << r.dataset << " | " << r.alpha.value_or(0) << " | " << r.n_max.value_or(r.lambda.size())
           << " | [" << lambda_text(r.lambda, true) << "] | "
           << (r.train_error ? fixed(*r.train_error, 3) : std::string("-")) << " |\n";
    }
    return md.str();
}

std::string render_csv(const std::vector<RunRecord>& records) {
    std::string out = "dataset,alpha,n,lambda,train_error,test_error,measure\n";
    auto opt_num = [](const auto& v) { return v ? format_double(static_cast<double>(*v)) : std::string(); };
    for (const auto& r : records) {
        if (r.dataset.find_first_of(",\"\n\r") != std::string::npos) {
            throw DataError("dataset name '" + r.dataset + "' cannot be written to CSV");
        }
        out += r.dataset + ',' + (r.alpha ? std::to_string(*r.alpha) : "") + ',' +
               (r.n_max ? std::to_string(*r.n_max) : "") + ',' + lambda_text(r.lambda, false) + ',' +
               opt_num(r.train_error) + ',' + opt_num(r.test_error) + ',' + r.measure + '\n';
    }
    return out;
}

std::vector<RunRecord> parse_csv(std::string_view text) {
    std::vector<RunRecord> out;
    std::size_t line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != "dataset,alpha,n,lambda,train_error,test_error,measure") {
                throw DataError("CSV line 1: unexpected header");
            }
            continue;
        }
        const auto f = split(line, ',');
        auto fail = [&](const std::string& what) -> DataError {
            return DataError("CSV line " + std::to_string(line_no) + ": " + what);
        };
        if (f.size() != 7) throw fail("expected 7 fields, got " + std::to_string(f.size()));
        auto opt_size = [&](std::string_view s) -> std::optional<std::size_t> {
            if (s.empty()) return std::nullopt;
            std::size_t v = 0;
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc{} || ptr != s.data() + s.size()) throw fail("bad integer '" + std::string(s) + "'");
            return v;
        };
        auto opt_real = [&](std::string_view s) -> std::optional<double> {
            if (s.empty()) return std::nullopt;
            const auto v = parse_double(s);
            if (!v) throw fail("bad number '" + std::string(s) + "'");
            return v;
        };
        RunRecord r;
        r.dataset = std::string(f[0]);
        r.alpha = opt_size(f[1]);
        r.n_max = opt_size(f[2]);
        if (!f[3].empty()) {
            for (auto w : split(f[3], ' ')) r.lambda.push_back(*opt_real(w));
        }
        r.train_error = opt_real(f[4]);
        r.test_error = opt_real(f[5]);
        r.measure = std::string(f[6]);
        out.push_back(std::move(r));
    }
    return out;
}

std::string dataset_name_from_path(const std::filesystem::path& path) {
    std::string stem = path.stem().string();
    for (std::string_view suffix : {"_TRAIN", "_TEST", "_train", "_test"}) {
        if (stem.size() > suffix.size() && stem.ends_with(suffix)) {
            stem.resize(stem.size() - suffix.size());
            break;
        }
    }
    return stem;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw std::runtime_error("cannot format double");
    return std::string(buf, ptr);
}

}  // namespace abcsg::experiment
