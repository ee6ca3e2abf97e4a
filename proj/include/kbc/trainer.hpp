#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kbc/storage.hpp"
#include "kbc/types.hpp"

namespace kbc {

struct CheckpointEntry {
    std::uint64_t epoch = 0;
    double valid_mrr_filtered = 0.0;
};

struct RunRecord {
    TrainConfig config;
    std::vector<double> epoch_objective;
    std::vector<CheckpointEntry> checkpoints;
    std::uint64_t best_epoch = 0;
    double best_valid_mrr = 0.0;
    bool has_best = false;
    double wall_clock_sec = 0.0;
    bool labeled_train = false;
};

struct TrainOptions {
    TrainConfig config;
    // 0 disables validation checkpoints; the outcome then carries the final
    // state only.
    std::uint32_t checkpoint_every = 50;
    bool record_objective = true;
    unsigned eval_threads = 1;
};

struct TrainOutcome {
    ModelParams params;       // final state
    OptimizerState opt;       // final state
    std::uint64_t next_epoch = 0;
    ModelParams best_params;  // best validation checkpoint, when tracked
    OptimizerState best_opt;
    std::uint64_t best_epoch = 0;
    bool has_best = false;
    RunRecord record;

    // Best checkpoint when available, final state otherwise.
    ModelArchive to_archive(const KnowledgeBase& kb, bool prefer_best = true) const;
};

// Sequential, deterministic training loop. When the train split carries
// explicit -1 labels (synthetic data) each labeled triple is one example and
// no negatives are sampled; otherwise every positive is grouped with freshly
// sampled pseudo-negatives. One optimizer step covers `minibatch` groups.
class Trainer {
public:
    Trainer(const KnowledgeBase& kb, const TrainConfig& config);
    Trainer(const KnowledgeBase& kb, const TrainConfig& config, ModelParams params,
            OptimizerState opt);

    void run_epoch(std::uint64_t epoch_index);

    const ModelParams& params() const { return params_; }
    const OptimizerState& opt() const { return opt_; }
    ModelParams& mutable_params() { return params_; }
    OptimizerState& mutable_opt() { return opt_; }
    bool labeled_mode() const { return labeled_mode_; }

private:
    void step(const std::vector<LabeledTriplet>& batch);

    const KnowledgeBase& kb_;
    TrainConfig cfg_;
    ModelParams params_;
    OptimizerState opt_;
    bool labeled_mode_ = false;
    BatchGradients scratch_;
};

// Full training driver with per-epoch objective recording and validation
// checkpointing. `resume` continues from a previously saved archive.
TrainOutcome train_model(const KnowledgeBase& kb, const TrainOptions& options,
                         const ModelArchive* resume = nullptr);

std::string run_record_to_json(const RunRecord& record);

}  // namespace kbc
