// Acceptance suite: one PASS/FAIL/SKIP line per criterion, nonzero exit on
// any failure. Criterion 8 needs the UCR archive; point ABCSG_UCR_DIR at it.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "abcsg/abc.hpp"
#include "abcsg/dtw.hpp"
#include "abcsg/experiment.hpp"
#include "abcsg/knn.hpp"
#include "abcsg/parallel.hpp"
#include "abcsg/sax.hpp"
#include "abcsg/sequences.hpp"
#include "oracles.hpp"

using namespace abcsg;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    enum Kind { Pass, Fail, Skip } kind = Pass;
    std::string detail;
};

// Collects the first few failure messages of a criterion.
class Checker {
public:
    void expect(bool ok, const std::string& what) {
        ++checks_;
        if (ok) return;
        ++failures_;
        if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
    }
    Outcome outcome() const {
        std::ostringstream os;
        if (failures_ == 0) {
            os << checks_ << " checks";
            return {Outcome::Pass, os.str()};
        }
        os << failures_ << "/" << checks_ << " checks failed: " << notes_;
        return {Outcome::Fail, os.str()};
    }

private:
    std::size_t checks_ = 0;
    std::size_t failures_ = 0;
    std::string notes_;
};

SymbolicSequence letters(const std::string& s) { return SymbolicSequence::from_letters(s); }

Outcome worked_example() {
    Checker c;
    const auto s = letters("exogen"), r = letters("oxygen"), t = letters("emolen");
    const std::int64_t sr[] = {5, 2, 1, 0, 0, 0};
    const std::int64_t st[] = {4, 1, 0, 0, 0, 0};
    std::int64_t sum_sr = 0, sum_st = 0;
    for (std::size_t n = 1; n <= 6; ++n) {
        const auto a = common_gram_mass(extract_ngrams(s, n), extract_ngrams(r, n));
        const auto b = common_gram_mass(extract_ngrams(s, n), extract_ngrams(t, n));
        c.expect(a == sr[n - 1], "mass(S,R) n=" + std::to_string(n) + " = " + std::to_string(a));
        c.expect(b == st[n - 1], "mass(S,T) n=" + std::to_string(n) + " = " + std::to_string(b));
        sum_sr += a;
        sum_st += b;
    }
    c.expect(sum_sr == 8, "sum(S,R) = " + std::to_string(sum_sr));
    c.expect(sum_st == 5, "sum(S,T) = " + std::to_string(sum_st));
    c.expect(edit_distance(s, r) == 2, "ED(S,R)");
    c.expect(edit_distance(s, t) == 2, "ED(S,T)");
    return c.outcome();
}

Outcome metric_properties() {
    Checker c;
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> alpha_dist(2, 10);
    std::uniform_real_distribution<double> w(0.0, 2.0);
    for (int k = 0; k < 1000; ++k) {
        const std::size_t alpha = alpha_dist(rng);
        const auto ab = Alphabet::letters(alpha);
        const SymbolicSequence s(oracle::random_string(rng, alpha, 0, 30), ab);
        const SymbolicSequence t(oracle::random_string(rng, alpha, 0, 30), ab);
        const SymbolicSequence u(oracle::random_string(rng, alpha, 0, 30), ab);
        const LambdaVector lam({w(rng), w(rng), w(rng)});

        for (std::size_t n = 1; n <= 3; ++n) {
            const auto st = mismatch_term(s, t, n), tu = mismatch_term(t, u, n), su = mismatch_term(s, u, n);
            c.expect(st == oracle::l1_gram_distance(s.str(), t.str(), n), "L1 oracle mismatch");
            c.expect(st == mismatch_term(t, s, n), "term symmetry");
            c.expect(st >= 0, "term non-negative");
            c.expect(mismatch_term(s, s, n) == 0, "term self-distance");
            c.expect(su <= st + tu, "term triangle");
        }
        const double dst = abc_sg_distance(s, t, lam);
        const double dtu = abc_sg_distance(t, u, lam);
        const double dsu = abc_sg_distance(s, u, lam);
        c.expect(dst == abc_sg_distance(t, s, lam), "distance symmetry");
        c.expect(dst >= 0.0, "distance non-negative");
        c.expect(abc_sg_distance(s, s, lam) == 0.0, "distance self");
        // Termwise triangle holds exactly on integers; the weighted sums only
        // pick up rounding.
        c.expect(dsu <= dst + dtu + 1e-12 * (1.0 + dst + dtu), "distance triangle");
    }
    return c.outcome();
}

Outcome eed_consistency() {
    Checker c;
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> w(0.0, 2.0);
    for (int k = 0; k < 200; ++k) {
        const auto s = letters(oracle::random_string(rng, 6, 0, 25));
        const auto t = letters(oracle::random_string(rng, 6, 0, 25));
        const double lam = w(rng);
        const double lhs = abc_sg_distance(s, t, LambdaVector({lam}));
        const double rhs = eed(s, t, lam) - double(edit_distance(s, t));
        c.expect(std::abs(lhs - rhs) <= 1e-12, "ABC-SG vs EED-ED");
    }
    return c.outcome();
}

Outcome dtw_oracle() {
    Checker c;
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::size_t> len(1, 6);
    std::uniform_real_distribution<double> val(-3.0, 3.0);
    for (int k = 0; k < 500; ++k) {
        std::vector<double> s(len(rng)), r(len(rng));
        for (double& x : s) x = val(rng);
        for (double& x : r) x = val(rng);
        c.expect(dtw_distance(TimeSeries(s), TimeSeries(r)) == oracle::dtw_exhaustive(s, r), "dtw vs exhaustive");
        c.expect(dtw_distance(TimeSeries(s), TimeSeries(s)) == 0.0, "dtw(s,s)");
    }
    const TimeSeries x({0.0}), y({1.0}), z({1.0, 1.0});
    c.expect(dtw_distance(x, z) > dtw_distance(x, y) + dtw_distance(y, z), "triangle witness");
    return c.outcome();
}

Outcome sax_properties() {
    Checker c;
    for (std::size_t a = 2; a <= 20; ++a) {
        const auto bt = make_breakpoints(a);
        const auto cuts = bt.cuts();
        double prev = 0.0;
        for (std::size_t i = 0; i <= cuts.size(); ++i) {
            const double cdf = i < cuts.size() ? oracle::phi(cuts[i]) : 1.0;
            c.expect(std::abs(cdf - prev - 1.0 / double(a)) < 1e-6, "area alpha=" + std::to_string(a));
            prev = cdf;
        }
    }
    std::mt19937_64 rng(5);
    for (int k = 0; k < 1000; ++k) {
        const std::size_t alpha = 2 + std::size_t(k) % 19;
        const auto s = z_normalize(TimeSeries(oracle::random_walk(rng, 128)));
        const auto t = z_normalize(TimeSeries(oracle::random_walk(rng, 128)));
        const double euclid =
            oracle::euclidean({s.values().begin(), s.values().end()}, {t.values().begin(), t.values().end()});
        const auto bt = make_breakpoints(alpha);
        const auto ab = Alphabet::letters(alpha);
        const auto ps = paa(s, 32), pt = paa(t, 32);
        c.expect(paa_distance(ps, pt) <= euclid + 1e-9, "paa_distance <= euclidean");
        c.expect(mindist(symbolize(ps, bt, ab), symbolize(pt, bt, ab), bt, 128) <= euclid + 1e-9,
                 "mindist <= euclidean");
    }
    return c.outcome();
}

Outcome abc_behavior() {
    Checker c;
    const auto sphere = [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; };
    int misses = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto cfg = abc::AbcConfig::uniform_box(2, -1.0, 1.0);
        cfg.pop_size = 20;
        cfg.nr_cycles = 50;
        cfg.seed = seed;
        abc::Colony colony(cfg, sphere);
        double prev = colony.best().fitness;
        for (std::size_t k = 0; k < cfg.nr_cycles; ++k) {
            const double now = colony.step().best_fitness;
            c.expect(now <= prev, "best-so-far increased, seed " + std::to_string(seed));
            prev = now;
        }
        if (!(prev < 1e-2)) ++misses;

        const auto a = abc::run(cfg, sphere), b = abc::run(cfg, sphere);
        bool same = a.history.size() == b.history.size() && a.best_position == b.best_position;
        for (std::size_t i = 0; same && i < a.history.size(); ++i)
            same = a.history[i].best_fitness == b.history[i].best_fitness;
        c.expect(same, "histories differ for seed " + std::to_string(seed));
    }
    c.expect(misses <= 1, std::to_string(misses) + " of 10 seeds missed 1e-2");
    return c.outcome();
}

Outcome fast_path() {
    Checker c;
    std::mt19937_64 rng(314);
    std::vector<SymbolicSequence> data;
    std::vector<Label> labels;
    const auto ab = Alphabet::letters(5);
    for (int i = 0; i < 50; ++i) {
        data.emplace_back(oracle::random_string(rng, 5, 5, 30), ab);
        labels.push_back(i % 3);
    }
    const auto tensor = build_mismatch_tensor(data, 3);
    std::uniform_real_distribution<double> w(0.0, 2.0);
    for (int k = 0; k < 20; ++k) {
        const LambdaVector lam({w(rng), w(rng), w(rng)});
        std::size_t wrong = 0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            std::optional<std::size_t> arg;
            double best = 0.0;
            for (std::size_t j = 0; j < data.size(); ++j) {
                if (j == i) continue;
                const double d = abc_sg_distance(data[i], data[j], lam);
                if (!arg || d < best) {
                    best = d;
                    arg = j;
                }
            }
            wrong += labels[*arg] != labels[i];
        }
        const double direct = double(wrong) / double(data.size());
        c.expect(loocv_error(tensor, labels, lam) == direct, "tensor LOOCV differs from direct");
    }
    return c.outcome();
}

std::optional<fs::path> find_split(const fs::path& root, const std::string& name, const std::string& split) {
    for (const auto& dir : {root / name, root}) {
        for (const char* ext : {"", ".txt", ".tsv", ".csv"}) {
            const auto p = dir / (name + "_" + split + ext);
            if (fs::is_regular_file(p)) return p;
        }
    }
    return std::nullopt;
}

Outcome reproduction() {
    const char* env = std::getenv("ABCSG_UCR_DIR");
    if (!env || !*env) return {Outcome::Skip, "ABCSG_UCR_DIR not set; UCR archive not available"};
    struct Target {
        std::vector<std::string> names;
        std::size_t alpha;
        double lambda;
        double abc_error;
        double dtw_error;
    };
    const Target targets[] = {
        {{"ECG200", "ECG"}, 3, 0.80394, 0.18, 0.23},
        {{"FaceFour"}, 10, 0.17061, 0.045, 0.170},
        {{"Beef"}, 20, 0.19036, 0.333, 0.5},
        {{"OSULeaf"}, 10, 0.54977, 0.298, 0.409},
    };
    Checker c;
    const unsigned threads = default_thread_count();
    for (const auto& tg : targets) {
        std::optional<fs::path> tr, te;
        for (const auto& n : tg.names) {
            tr = find_split(env, n, "TRAIN");
            te = find_split(env, n, "TEST");
            if (tr && te) break;
        }
        if (!tr || !te) return {Outcome::Skip, "missing " + tg.names.front() + " under " + std::string(env)};
        const auto train_set = load_ucr(*tr);
        const auto test_set = load_ucr(*te);
        const auto& name = tg.names.front();

        experiment::RunRecord r;
        r.dataset = name;
        r.measure = "abc-sg";
        r.alpha = tg.alpha;
        r.ratio = 4;
        r.lambda = {tg.lambda};
        const double got = *experiment::test(train_set, test_set, r, threads).record.test_error;
        c.expect(std::abs(got - tg.abc_error) <= 0.03, name + " ABC-SG " + std::to_string(got));

        const double dtw = *experiment::dtw_baseline(train_set, test_set, name, true, threads).record.test_error;
        c.expect(std::abs(dtw - tg.dtw_error) <= 0.03, name + " DTW " + std::to_string(dtw));

        // End-to-end training, best of three seeds.
        double best = std::numeric_limits<double>::infinity();
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            experiment::TrainConfig cfg;
            cfg.dataset = name;
            cfg.sax = {tg.alpha, 4};
            cfg.seed = seed;
            cfg.threads = threads;
            const auto trained = experiment::train(train_set, cfg);
            const double e = *experiment::test(train_set, test_set, trained, threads).record.test_error;
            best = std::min(best, std::abs(e - tg.abc_error));
        }
        c.expect(best <= 0.05, name + " trained lambda off by " + std::to_string(best));
    }
    return c.outcome();
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const Criterion criteria[] = {
        {1, "worked example", worked_example},
        {2, "metric properties", metric_properties},
        {3, "EED consistency", eed_consistency},
        {4, "DTW oracle", dtw_oracle},
        {5, "SAX properties", sax_properties},
        {6, "ABC behavior", abc_behavior},
        {7, "fast-path equivalence", fast_path},
        {8, "UCR reproduction", reproduction},
    };
    int failed = 0;
    for (const auto& cr : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = cr.run();
        } catch (const std::exception& e) {
            o = {Outcome::Fail, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const char* tag = o.kind == Outcome::Pass ? "PASS" : o.kind == Outcome::Fail ? "FAIL" : "SKIP";
        std::printf("%s  criterion %d (%s): %s [%.2fs]\n", tag, cr.id, cr.name, o.detail.c_str(), secs);
        failed += o.kind == Outcome::Fail;
    }
    std::fflush(stdout);
    return failed == 0 ? 0 : 1;
}
