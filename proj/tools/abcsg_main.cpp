// abcsg: batch driver for SAX conversion, ABC training of the ABC-SG weights,
// 1-NN evaluation, the DTW baseline, ad-hoc distances and report tables.
//
// Exit codes: 0 success, 2 usage, 3 data error, 4 internal error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "abcsg/experiment.hpp"
#include "abcsg/parallel.hpp"

namespace fs = std::filesystem;
using namespace abcsg;
using namespace abcsg::experiment;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitInternal = 4;

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + out_path + "'");
    out << text;
}

std::size_t positive_threads(unsigned t) { return t == 0 ? default_thread_count() : t; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ABC-SG sequence distance toolkit"};
    app.require_subcommand(1);

    SaxConfig sax;
    std::size_t n_max = 1;
    AbcSettings abc_settings;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::string out_path;
    std::string dataset;

    // convert
    auto* convert = app.add_subcommand("convert", "SAX-convert a UCR file to a symbolic dataset file");
    std::string convert_input;
    convert->add_option("input", convert_input, "UCR text file")->required()->check(CLI::ExistingFile);
    convert->add_option("--alpha", sax.alpha, "alphabet size")->capture_default_str();
    convert->add_option("--ratio", sax.ratio, "compression ratio (N = n / ratio)")->capture_default_str();
    convert->add_option("--out", out_path, "output file (default stdout)");

    // train
    auto* train_cmd = app.add_subcommand("train", "tune lambda by ABC on the training split");
    std::string train_path;
    train_cmd->add_option("train", train_path, "UCR training file")->required()->check(CLI::ExistingFile);
    train_cmd->add_option("--alpha", sax.alpha, "alphabet size")->capture_default_str();
    train_cmd->add_option("--ratio", sax.ratio, "compression ratio")->capture_default_str();
    train_cmd->add_option("--ngrams", n_max, "n-gram depth (length of lambda)")->capture_default_str();
    train_cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
    train_cmd->add_option("--pop-size", abc_settings.pop_size, "food sources")->capture_default_str();
    train_cmd->add_option("--cycles", abc_settings.nr_cycles, "ABC cycles")->capture_default_str();
    train_cmd->add_option("--max-trials", abc_settings.max_nr, "trials before abandonment")->capture_default_str();
    train_cmd->add_option("--lambda-hi", abc_settings.lambda_hi, "upper bound of every lambda")->capture_default_str();
    train_cmd->add_option("--repeats", abc_settings.repeats, "independent ABC restarts")->capture_default_str();
    train_cmd->add_option("--threads", threads, "worker threads (0 = all cores)");
    train_cmd->add_option("--dataset", dataset, "dataset name (default from file name)");
    train_cmd->add_option("--out", out_path, "artifact path (default stdout)");

    // test
    auto* test_cmd = app.add_subcommand("test", "classify the test split with a trained or given lambda");
    std::string test_train_path, test_path, artifact_path, lambda_list;
    std::optional<std::size_t> want_alpha, want_ngrams;
    std::size_t test_ratio = 4;
    test_cmd->add_option("train", test_train_path, "UCR training file")->required()->check(CLI::ExistingFile);
    test_cmd->add_option("test", test_path, "UCR test file")->required()->check(CLI::ExistingFile);
    auto* art_opt = test_cmd->add_option("--artifact", artifact_path, "lambda artifact from `train`");
    auto* lam_opt = test_cmd->add_option("--lambda", lambda_list, "explicit comma-separated lambda");
    art_opt->excludes(lam_opt);
    test_cmd->add_option("--alpha", want_alpha, "alphabet size (must match the artifact)");
    test_cmd->add_option("--ngrams", want_ngrams, "n-gram depth (must match the artifact)");
    test_cmd->add_option("--ratio", test_ratio, "compression ratio when --lambda is given")->capture_default_str();
    test_cmd->add_option("--threads", threads, "worker threads (0 = all cores)");
    test_cmd->add_option("--dataset", dataset, "dataset name (default from file name)");
    test_cmd->add_option("--out", out_path, "result record path (default stdout)");

    // dtw
    auto* dtw_cmd = app.add_subcommand("dtw", "1-NN DTW baseline on the raw series");
    std::string dtw_train_path, dtw_test_path;
    bool no_normalize = false;
    dtw_cmd->add_option("train", dtw_train_path, "UCR training file")->required()->check(CLI::ExistingFile);
    dtw_cmd->add_option("test", dtw_test_path, "UCR test file")->required()->check(CLI::ExistingFile);
    dtw_cmd->add_flag("--no-normalize", no_normalize, "use the series exactly as stored");
    dtw_cmd->add_option("--threads", threads, "worker threads (0 = all cores)");
    dtw_cmd->add_option("--dataset", dataset, "dataset name (default from file name)");
    dtw_cmd->add_option("--out", out_path, "result record path (default stdout)");

    // dist
    auto* dist_cmd = app.add_subcommand("dist", "distance between two inputs");
    std::string measure, seq_a, seq_b, dist_lambda;
    DistOptions dist_opts;
    dist_cmd->add_option("measure", measure, "ed | eed | abc-sg | dtw | mindist")->required();
    dist_cmd->add_option("a", seq_a, "first input")->required();
    dist_cmd->add_option("b", seq_b, "second input")->required();
    dist_cmd->add_option("--lambda", dist_lambda, "comma-separated weights");
    dist_cmd->add_option("--alpha", dist_opts.alpha, "alphabet size (first alpha letters)");
    dist_cmd->add_option("--length", dist_opts.length, "source series length for mindist");
    dist_cmd->add_option("--ratio", dist_opts.ratio, "compression ratio for mindist when --length is absent");

    // report
    auto* report_cmd = app.add_subcommand("report", "markdown + CSV tables from result records");
    std::vector<std::string> record_paths;
    report_cmd->add_option("records", record_paths, "record / artifact JSON files")->check(CLI::ExistingFile);
    report_cmd->add_option("--out", out_path, "directory for report.md and report.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        const unsigned nthreads = static_cast<unsigned>(positive_threads(threads));
        Stopwatch clock;

        if (*convert) {
            const auto data = load_ucr(convert_input);
            std::ostringstream text;
            write_symbolic(text, convert_dataset(data, sax));
            emit(text.str(), out_path);
        } else if (*train_cmd) {
            TrainConfig cfg;
            cfg.dataset = dataset.empty() ? dataset_name_from_path(train_path) : dataset;
            cfg.sax = sax;
            cfg.n_max = n_max;
            cfg.abc = abc_settings;
            cfg.seed = seed;
            cfg.threads = nthreads;
            const auto data = load_ucr(train_path);
            const auto rec = train(data, cfg);
            emit(to_json(rec), out_path);
            std::fprintf(stderr, "train %s alpha=%zu n=%zu: train error %.4f (%.2fs)\n", cfg.dataset.c_str(),
                         sax.alpha, n_max, *rec.train_error, clock.seconds());
        } else if (*test_cmd) {
            RunRecord trained;
            if (!artifact_path.empty()) {
                trained = load_record(artifact_path);
                check_compatible(trained, want_alpha, want_ngrams);
            } else if (!lambda_list.empty()) {
                if (!want_alpha) throw UsageError("--lambda needs --alpha");
                trained.measure = "abc-sg";
                trained.lambda = parse_lambda_list(lambda_list);
                trained.alpha = want_alpha;
                trained.ratio = test_ratio;
                trained.n_max = trained.lambda.size();
                check_compatible(trained, want_alpha, want_ngrams);
            } else {
                throw UsageError("test needs --artifact or --lambda");
            }
            if (!dataset.empty()) {
                trained.dataset = dataset;
            } else if (trained.dataset.empty()) {
                trained.dataset = dataset_name_from_path(test_path);
            }
            const auto outcome = test(load_ucr(test_train_path), load_ucr(test_path), trained, nthreads);
            emit(to_json(outcome.record), out_path);
            std::fprintf(stderr, "test %s alpha=%zu n=%zu: test error %.4f (%.2fs)\n", outcome.record.dataset.c_str(),
                         *outcome.record.alpha, outcome.record.lambda.size(), *outcome.record.test_error,
                         clock.seconds());
        } else if (*dtw_cmd) {
            const auto name = dataset.empty() ? dataset_name_from_path(dtw_test_path) : dataset;
            const auto outcome =
                dtw_baseline(load_ucr(dtw_train_path), load_ucr(dtw_test_path), name, !no_normalize, nthreads);
            emit(to_json(outcome.record), out_path);
            std::fprintf(stderr, "dtw %s: test error %.4f (%.2fs)\n", name.c_str(), *outcome.record.test_error,
                         clock.seconds());
        } else if (*dist_cmd) {
            if (!dist_lambda.empty()) dist_opts.lambda = parse_lambda_list(dist_lambda);
            std::printf("%.6f\n", compute_distance(measure, seq_a, seq_b, dist_opts));
        } else if (*report_cmd) {
            if (record_paths.empty()) throw UsageError("report needs at least one record file");
            std::vector<std::pair<std::string, RunRecord>> sourced;
            for (const auto& p : record_paths) sourced.emplace_back(p, load_record(p));
            const auto records = merge_records(sourced);
            const auto md = render_markdown(records);
            const auto csv = render_csv(records);
            if (!out_path.empty()) {
                fs::create_directories(out_path);
                emit(md, (fs::path(out_path) / "report.md").string());
                emit(csv, (fs::path(out_path) / "report.csv").string());
            }
            std::cout << md;
        }
        return 0;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return kExitUsage;
    } catch (const DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return kExitData;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return kExitInternal;
    }
}
