#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "kbc/metrics.hpp"
#include "kbc/storage.hpp"
#include "kbc/synthgen.hpp"
#include "kbc/trainer.hpp"

namespace kbc {

struct DatasetPaths {
    std::string train;
    std::string valid;
    std::string test;
};

struct TrainCmdOptions {
    DatasetPaths data;
    TrainConfig config;
    std::uint32_t checkpoint_every = 50;
    unsigned eval_threads = 1;
    std::string out;
    std::string record_out;  // defaults to <out>.run.json
    std::string resume;
    double subsample_train = 1.0;  // fraction of train rows kept, seeded
    bool grid = false;
    std::vector<double> grid_lambdas = {0.01, 0.001, 0.0001, 0.0};
    std::vector<double> grid_alphas = {0.0, 0.3, 0.5, 0.7, 1.0};
    std::vector<double> grid_etas = {0.1, 0.05};
    unsigned jobs = 1;
    bool quiet = false;
};

struct GridCell {
    double lambda = 0.0, alpha = 0.0, eta = 0.0;
    double valid_mrr = 0.0;
};

struct TrainCmdResult {
    std::string out_path;
    bool has_best = false;
    std::uint64_t best_epoch = 0;
    double best_valid_mrr = 0.0;
    std::vector<GridCell> grid;  // populated in grid mode
    TrainConfig selected;
};

TrainCmdResult run_train(const TrainCmdOptions& options, std::ostream& log);

struct EvalCmdOptions {
    std::string model;
    DatasetPaths data;
    std::string task = "rank";   // rank | classify
    std::string split = "test";  // test | valid | train
    bool per_relation = false;
    bool pretty = false;
    unsigned threads = 1;
};

struct EvalCmdResult {
    RankingReport ranking;
    ClassificationReport classification;
    bool ranked = false;
    bool classified = false;
};

EvalCmdResult run_eval(const EvalCmdOptions& options, std::ostream& out);

struct SynthCmdOptions {
    SynthConfig config;
    std::string out_dir;
};

struct SynthCmdResult {
    std::size_t n_train = 0, n_valid = 0, n_test = 0;
    std::string train_path, valid_path, test_path;
};

SynthCmdResult run_synth(const SynthCmdOptions& options, std::ostream& log);

struct AnalyzeCmdOptions {
    std::string model;
    DatasetPaths data;
    std::string out;          // empty -> stdout
    std::string pattern_out;  // optional nonzero-pattern grid
};

std::vector<RelationAnalysisRow> run_analyze(const AnalyzeCmdOptions& options,
                                             std::ostream& out);

struct VarianceCmdOptions {
    DatasetPaths data;
    TrainConfig base;
    std::vector<Regime> regimes = {Regime::MulL1, Regime::StdL1, Regime::L2Only};
    std::uint32_t trials = 8;
    std::vector<std::uint64_t> seeds;  // explicit trial seeds; default derived
    std::string metric = "mrr";        // mrr | accuracy
    unsigned jobs = 1;
};

struct VarianceSummary {
    Regime regime = Regime::MulL1;
    std::vector<double> values;  // per trial, in seed order
    double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

std::vector<VarianceSummary> run_variance(const VarianceCmdOptions& options,
                                          std::ostream& out);

// Rewrites a dataset loaded from files onto the archive's vocabulary, so ids
// agree with the stored embeddings. Unknown names are a vocabulary mismatch.
KnowledgeBase remap_to_archive(const KnowledgeBase& file_kb, const ModelArchive& archive);

}  // namespace kbc
