#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>
#include <map>

#include "abcsg/abc.hpp"
#include "abcsg/dtw.hpp"
#include "abcsg/experiment.hpp"
#include "abcsg/knn.hpp"
#include "abcsg/sax.hpp"
#include "abcsg/sequences.hpp"

namespace py = pybind11;
using namespace abcsg;

namespace {

// Sequences cross the boundary as plain strings over 'a'..'z'.
SymbolicSequence seq(const std::string& s) { return SymbolicSequence::from_letters(s); }

LabeledDataset<TimeSeries> dataset(const std::vector<Label>& labels, const std::vector<std::vector<double>>& series) {
    if (labels.size() != series.size()) throw std::invalid_argument("labels and series differ in length");
    LabeledDataset<TimeSeries> d;
    for (std::size_t i = 0; i < labels.size(); ++i) d.add(labels[i], TimeSeries(series[i]));
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "ABC-SG n-gram distance, SAX, DTW and ABC weight tuning";

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);

    m.def("edit_distance", [](const std::string& s, const std::string& t) { return edit_distance(seq(s), seq(t)); },
          py::arg("s"), py::arg("t"));
    m.def("eed", [](const std::string& s, const std::string& t, double lam) { return eed(seq(s), seq(t), lam); },
          py::arg("s"), py::arg("t"), py::arg("lam"));
    m.def(
        "abc_sg_distance",
        [](const std::string& s, const std::string& t, std::vector<double> lam) {
            return abc_sg_distance(seq(s), seq(t), LambdaVector(std::move(lam), std::numeric_limits<double>::infinity()));
        },
        py::arg("s"), py::arg("t"), py::arg("lam"));
    m.def(
        "mismatch_term", [](const std::string& s, const std::string& t, std::size_t n) {
            return mismatch_term(seq(s), seq(t), n);
        },
        py::arg("s"), py::arg("t"), py::arg("n"));
    m.def(
        "common_gram_mass",
        [](const std::string& s, const std::string& t, std::size_t n) {
            return common_gram_mass(extract_ngrams(seq(s), n), extract_ngrams(seq(t), n));
        },
        py::arg("s"), py::arg("t"), py::arg("n"));
    m.def(
        "ngrams",
        [](const std::string& s, std::size_t n) {
            std::map<std::string, std::int64_t> out;
            const auto profile = extract_ngrams(seq(s), n);
            for (const auto& e : profile.entries()) out.emplace(e.gram, e.count);
            return out;
        },
        py::arg("s"), py::arg("n"));

    m.def("z_normalize", [](std::vector<double> x) {
        const auto z = z_normalize(TimeSeries(std::move(x)));
        return std::vector<double>(z.values().begin(), z.values().end());
    });
    m.def(
        "paa",
        [](std::vector<double> x, std::size_t segments) {
            const auto p = paa(TimeSeries(std::move(x)), segments);
            return std::vector<double>(p.segments().begin(), p.segments().end());
        },
        py::arg("x"), py::arg("segments"));
    m.def("breakpoints", [](std::size_t alpha) {
        const auto bt = make_breakpoints(alpha);
        return std::vector<double>(bt.cuts().begin(), bt.cuts().end());
    });
    m.def(
        "sax",
        [](std::vector<double> x, std::size_t segments, std::size_t alpha) {
            return sax_transform(TimeSeries(std::move(x)), segments, make_breakpoints(alpha), Alphabet::letters(alpha))
                .str();
        },
        py::arg("x"), py::arg("segments"), py::arg("alpha"));
    m.def(
        "mindist",
        [](const std::string& a, const std::string& b, std::size_t alpha, std::size_t length) {
            const auto ab = Alphabet::letters(alpha);
            return mindist(SymbolicSequence(a, ab), SymbolicSequence(b, ab), make_breakpoints(alpha), length);
        },
        py::arg("a"), py::arg("b"), py::arg("alpha"), py::arg("length"));
    m.def("dtw_distance", [](std::vector<double> a, std::vector<double> b) {
        return dtw_distance(TimeSeries(std::move(a)), TimeSeries(std::move(b)));
    });

    m.def(
        "loocv_error",
        [](const std::vector<std::string>& sequences, const std::vector<Label>& labels, const std::vector<double>& lam) {
            std::vector<SymbolicSequence> seqs;
            seqs.reserve(sequences.size());
            for (const auto& s : sequences) seqs.push_back(seq(s));
            py::gil_scoped_release release;
            return loocv_error(build_mismatch_tensor(seqs, lam.size()), labels, lam);
        },
        py::arg("sequences"), py::arg("labels"), py::arg("lam"));

    m.def(
        "abc_minimize",
        [](const std::function<double(std::vector<double>)>& f, const std::vector<std::pair<double, double>>& bounds,
           std::size_t pop_size, std::size_t nr_cycles, std::size_t max_nr, std::uint64_t seed) {
            abc::AbcConfig cfg;
            cfg.pop_size = pop_size;
            cfg.nr_cycles = nr_cycles;
            cfg.max_nr = max_nr;
            cfg.seed = seed;
            cfg.bounds.clear();
            for (const auto& [lo, hi] : bounds) cfg.bounds.push_back({lo, hi});
            const auto r = abc::run(cfg, [&](std::span<const double> x) { return f({x.begin(), x.end()}); });
            std::vector<double> history;
            for (const auto& c : r.history) history.push_back(c.best_fitness);
            py::dict out;
            out["position"] = r.best_position;
            out["fitness"] = r.best_fitness;
            out["history"] = history;
            out["evaluations"] = r.evaluations;
            return out;
        },
        py::arg("f"), py::arg("bounds"), py::arg("pop_size") = 20, py::arg("nr_cycles") = 20, py::arg("max_nr") = 10,
        py::arg("seed") = 1);

    m.def(
        "train_json",
        [](const std::vector<Label>& labels, const std::vector<std::vector<double>>& series, std::size_t alpha,
           std::size_t ratio, std::size_t n_max, std::uint64_t seed, std::size_t pop_size, std::size_t nr_cycles,
           std::size_t max_nr, std::size_t repeats, std::string name) {
            experiment::TrainConfig cfg;
            cfg.dataset = std::move(name);
            cfg.sax = {alpha, ratio};
            cfg.n_max = n_max;
            cfg.seed = seed;
            cfg.abc.pop_size = pop_size;
            cfg.abc.nr_cycles = nr_cycles;
            cfg.abc.max_nr = max_nr;
            cfg.abc.repeats = repeats;
            const auto data = dataset(labels, series);
            py::gil_scoped_release release;
            return experiment::to_json(experiment::train(data, cfg));
        },
        py::arg("labels"), py::arg("series"), py::arg("alpha") = 3, py::arg("ratio") = 4, py::arg("n_max") = 1,
        py::arg("seed") = 1, py::arg("pop_size") = 20, py::arg("nr_cycles") = 20, py::arg("max_nr") = 10,
        py::arg("repeats") = 1, py::arg("name") = "data");

    m.def(
        "classify",
        [](const std::vector<Label>& train_labels, const std::vector<std::vector<double>>& train_series,
           const std::vector<Label>& test_labels, const std::vector<std::vector<double>>& test_series,
           std::vector<double> lam, std::size_t alpha, std::size_t ratio) {
            experiment::RunRecord r;
            r.dataset = "data";
            r.measure = "abc-sg";
            r.alpha = alpha;
            r.ratio = ratio;
            r.lambda = std::move(lam);
            const auto tr = dataset(train_labels, train_series);
            const auto te = dataset(test_labels, test_series);
            Classification c;
            {
                py::gil_scoped_release release;
                c = experiment::test(tr, te, r, 1).classification;
            }
            return py::make_tuple(c.error, c.predictions);
        },
        py::arg("train_labels"), py::arg("train_series"), py::arg("test_labels"), py::arg("test_series"),
        py::arg("lam"), py::arg("alpha") = 3, py::arg("ratio") = 4);
}
