#include <cmath>
#include <random>
#include <sstream>

#include "abcsg/experiment.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace abcsg;
using namespace abcsg::experiment;

namespace {

LabeledDataset<TimeSeries> parse(const std::string& text) {
    std::istringstream in(text);
    return parse_ucr(in, "test.txt");
}

// Two classes: rising ramps and bumps, with noise.
LabeledDataset<TimeSeries> synthetic(std::uint64_t seed, std::size_t per_class, std::size_t length) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.2);
    LabeledDataset<TimeSeries> d;
    for (std::size_t k = 0; k < per_class; ++k) {
        std::vector<double> ramp(length), bump(length);
        for (std::size_t i = 0; i < length; ++i) {
            const double x = double(i) / double(length - 1);
            ramp[i] = x + noise(rng);
            bump[i] = std::exp(-30.0 * (x - 0.5) * (x - 0.5)) + noise(rng);
        }
        d.add(1, TimeSeries(ramp));
        d.add(2, TimeSeries(bump));
    }
    return d;
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("UCR parsing") {
    const auto d = parse("1,0.5,0.7,0.9\n\n2 0.1 0.2\n  -1\t3.5 , 4\n1.0e0,2,NaN,NaN\n");
    REQUIRE(d.size() == 4);
    CHECK(d.labels == std::vector<Label>{1, 2, -1, 1});
    CHECK(d.items[0] == TimeSeries({0.5, 0.7, 0.9}));
    CHECK(d.items[1] == TimeSeries({0.1, 0.2}));
    CHECK(d.items[2] == TimeSeries({3.5, 4.0}));
    CHECK(d.items[3] == TimeSeries({2.0}));
}

TEST_CASE("UCR parse errors name line and column") {
    try {
        parse("1,0.5\n2,0.1,abc,0.3\n");
        FAIL("expected DataError");
    } catch (const DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("line 2") != std::string::npos);
        CHECK(msg.find("column 7") != std::string::npos);
        CHECK(msg.find("abc") != std::string::npos);
    }
    CHECK_THROWS_AS(parse("1.5,0.1\n"), DataError);
    CHECK_THROWS_AS(parse("3\n"), DataError);
    CHECK_THROWS_AS(parse("1,0.2,NaN,0.3\n"), DataError);
    CHECK_THROWS_AS(load_ucr("/nonexistent/file.txt"), DataError);
}

TEST_CASE("convert") {
    const auto flat = parse("1,5,5,5,5,5,5,5,5\n");
    std::ostringstream out;
    write_symbolic(out, convert_dataset(flat, SaxConfig{3, 4}));
    CHECK(out.str() == "1\tbb\n");

    std::vector<double> v(16);
    for (std::size_t i = 0; i < 16; ++i) v[i] = double(i);
    LabeledDataset<TimeSeries> d;
    d.add(3, TimeSeries(v));
    const auto conv = convert_dataset(d, SaxConfig{4, 4});
    CHECK(conv.items[0].size() == 4);
    CHECK(conv.items[0].str() == "abcd");
    CHECK(segment_count(3, 4) == 1);
    CHECK(segment_count(427, 4) == 106);

    CHECK_THROWS_AS(convert_dataset(d, SaxConfig{1, 4}), UsageError);
    CHECK_THROWS_AS(convert_dataset(d, SaxConfig{3, 0}), UsageError);
}

TEST_CASE("train produces a bounded, reproducible lambda") {
    const auto data = synthetic(1, 10, 32);
    TrainConfig cfg;
    cfg.dataset = "toy";
    cfg.sax = SaxConfig{5, 4};
    cfg.n_max = 3;
    cfg.abc.nr_cycles = 5;
    cfg.seed = 3;
    const auto a = train(data, cfg);
    REQUIRE(a.lambda.size() == 3);
    for (double w : a.lambda) {
        CHECK(w >= 0.0);
        CHECK(w <= 2.0);
    }
    CHECK(a.history.size() == 5);
    for (std::size_t i = 1; i < a.history.size(); ++i) CHECK(a.history[i] <= a.history[i - 1]);
    CHECK(*a.train_error == a.history.back());
    CHECK(to_json(train(data, cfg)) == to_json(a));

    cfg.n_max = 1;
    CHECK(train(data, cfg).lambda.size() == 1);

    cfg.abc.repeats = 3;
    const auto multi = train(data, cfg);
    CHECK(*multi.train_error <= *train(data, [&] { auto c = cfg; c.abc.repeats = 1; return c; }()).train_error);

    cfg.abc.pop_size = 1;
    CHECK_THROWS_AS(train(data, cfg), UsageError);
}

TEST_CASE("test and dtw baseline") {
    const auto tr = synthetic(2, 8, 40);
    const auto te = synthetic(3, 8, 40);
    RunRecord r;
    r.dataset = "toy";
    r.measure = "abc-sg";
    r.alpha = 6;
    r.lambda = {1.0, 0.5};
    const auto out = test(tr, te, r, 2);
    CHECK(out.record.test_error.has_value());
    CHECK(*out.record.test_error == out.classification.error);
    CHECK(out.record.n_max == 2u);
    CHECK(*out.record.test_error < 0.3);

    const auto dtw = dtw_baseline(tr, te, "toy", true, 2);
    CHECK(dtw.record.measure == "dtw");
    CHECK(*dtw.record.test_error < 0.3);

    LabeledDataset<TimeSeries> one_class;
    one_class.add(4, TimeSeries({1, 2, 3}));
    one_class.add(4, TimeSeries({3, 2, 1}));
    CHECK(dtw_baseline(one_class, one_class, "single", true, 1).record.test_error == 0.0);
}

TEST_CASE("artifact compatibility checks") {
    RunRecord r;
    r.measure = "abc-sg";
    r.alpha = 10;
    r.lambda = {0.2};
    r.n_max = 1;
    CHECK_NOTHROW(check_compatible(r, 10, 1));
    CHECK_THROWS_AS(check_compatible(r, 3, std::nullopt), UsageError);
    CHECK_THROWS_AS(check_compatible(r, std::nullopt, 3), UsageError);
}

TEST_CASE("record JSON round trip") {
    RunRecord r;
    r.dataset = "ECG";
    r.measure = "abc-sg";
    r.alpha = 3;
    r.ratio = 4;
    r.n_max = 2;
    r.lambda = {0.1 + 0.2, 1.0 / 3.0};
    r.train_error = 0.17;
    r.seed = 12345678901234ULL;
    r.abc = AbcSettings{};
    r.history = {0.3, 0.2, 0.17};
    const auto text = to_json(r);
    CHECK(text.find("\"schema_version\": 1") != std::string::npos);
    CHECK(record_from_json(text) == r);

    CHECK_THROWS_AS(record_from_json("{"), DataError);
    CHECK_THROWS_AS(record_from_json(R"({"schema_version": 2, "dataset": "x", "measure": "dtw"})"), DataError);
    CHECK_THROWS_AS(record_from_json(R"({"schema_version": 1, "dataset": "x", "measure": "abc-sg",
                                         "n_max": 2, "lambda": [1]})"),
                    DataError);
}

TEST_CASE("CSV round trip") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    std::vector<RunRecord> recs;
    for (std::size_t alpha : {3, 10, 20}) {
        for (std::size_t n = 1; n <= 3; ++n) {
            RunRecord r;
            r.dataset = "Beef";
            r.measure = "abc-sg";
            r.alpha = alpha;
            r.n_max = n;
            for (std::size_t i = 0; i < n; ++i) r.lambda.push_back(u(rng));
            r.train_error = u(rng) / 2;
            r.test_error = u(rng) / 2;
            recs.push_back(r);
        }
    }
    RunRecord dtw;
    dtw.dataset = "Beef";
    dtw.measure = "dtw";
    dtw.test_error = 0.5;
    recs.push_back(dtw);

    const auto csv = render_csv(recs);
    CHECK(csv.rfind("dataset,alpha,n,lambda,train_error,test_error,measure\n", 0) == 0);
    const auto back = parse_csv(csv);
    REQUIRE(back.size() == recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        CHECK(back[i].dataset == recs[i].dataset);
        CHECK(back[i].alpha == recs[i].alpha);
        CHECK(back[i].n_max == recs[i].n_max);
        CHECK(back[i].lambda == recs[i].lambda);
        CHECK(back[i].train_error == recs[i].train_error);
        CHECK(back[i].test_error == recs[i].test_error);
        CHECK(back[i].measure == recs[i].measure);
    }
    CHECK_THROWS_AS(parse_csv("nope\n"), DataError);
}

TEST_CASE("report tables and conflicts") {
    std::vector<std::pair<std::string, RunRecord>> sourced;
    const double errs[3][3] = {{0.567, 0.567, 0.567}, {0.5, 0.5, 0.467}, {0.333, 0.367, 0.367}};
    const std::size_t alphas[3] = {3, 10, 20};
    for (int a = 0; a < 3; ++a) {
        for (std::size_t n = 1; n <= 3; ++n) {
            RunRecord r;
            r.dataset = "Beef";
            r.measure = "abc-sg";
            r.alpha = alphas[a];
            r.n_max = n;
            r.lambda.assign(n, 0.5);
            r.test_error = errs[a][n - 1];
            sourced.emplace_back("beef_" + std::to_string(a) + std::to_string(n), r);
        }
    }
    RunRecord dtw;
    dtw.dataset = "Beef";
    dtw.measure = "dtw";
    dtw.test_error = 0.5;
    sourced.emplace_back("beef_dtw", dtw);
    sourced.emplace_back("beef_dtw_copy", dtw);

    const auto merged = merge_records(sourced);
    CHECK(merged.size() == 10);
    const auto md = render_markdown(merged);
    CHECK(md.find("### Beef") != std::string::npos);
    CHECK(md.find("| alpha | ABC-SG n=1 | ABC-SG n=2 | ABC-SG n=3 | DTW |") != std::string::npos);
    CHECK(md.find("| 3 | 0.567 | 0.567 | 0.567 | 0.500 |") != std::string::npos);
    CHECK(md.find("| 10 | 0.500 | 0.500 | 0.467 |  |") != std::string::npos);
    CHECK(md.find("| 20 | 0.333 | 0.367 | 0.367 |  |") != std::string::npos);
    CHECK(md.find("| Beef | 3 | 2 | [0.5 0.5] |") != std::string::npos);

    const auto csv = render_csv(merged);
    CHECK(parse_csv(csv).size() == merged.size());

    auto conflicting = sourced;
    dtw.test_error = 0.6;
    conflicting.emplace_back("other_dtw", dtw);
    try {
        merge_records(conflicting);
        FAIL("expected a conflict");
    } catch (const DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("beef_dtw") != std::string::npos);
        CHECK(msg.find("other_dtw") != std::string::npos);
    }
}

TEST_CASE("compute_distance") {
    CHECK(compute_distance("ed", "exogen", "oxygen", {}) == 2.0);
    DistOptions one;
    one.lambda = {1.0};
    CHECK(compute_distance("abc-sg", "exogen", "emolen", one) == 4.0);
    CHECK(compute_distance("eed", "exogen", "oxygen", one) == 4.0);
    DistOptions three;
    three.lambda = {1, 1, 1};
    CHECK(compute_distance("abc-sg", "exogen", "exogen", three) == 0.0);
    CHECK(compute_distance("dtw", "1,2,3", "1,3", {}) == 1.0);
    DistOptions md;
    md.alpha = 3;
    md.length = 16;
    CHECK(compute_distance("mindist", "aaaa", "cccc", md) == doctest::Approx(3.4458).epsilon(1e-4));

    CHECK_THROWS_AS(compute_distance("cosine", "a", "b", {}), UsageError);
    CHECK_THROWS_AS(compute_distance("abc-sg", "a", "b", {}), UsageError);
    CHECK_THROWS_AS(compute_distance("mindist", "ab", "ab", {}), UsageError);
    CHECK_THROWS_AS(compute_distance("ed", "AB", "ab", {}), UsageError);
    CHECK_THROWS_AS(parse_lambda_list("0.1,,0.2"), UsageError);
    CHECK_THROWS_AS(parse_lambda_list("x"), UsageError);
    CHECK(parse_lambda_list("0.80394") == std::vector<double>{0.80394});
    CHECK(parse_lambda_list("1, 2 ,3") == std::vector<double>{1, 2, 3});
}

TEST_CASE("helpers") {
    CHECK(dataset_name_from_path("data/ECG200_TRAIN.txt") == "ECG200");
    CHECK(dataset_name_from_path("Beef_TEST") == "Beef");
    CHECK(dataset_name_from_path("plain.csv") == "plain");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
}

}  // TEST_SUITE
