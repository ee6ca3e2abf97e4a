#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kbc/optim.hpp"
#include "kbc/types.hpp"

namespace kbc {

enum class TripleFormat { Auto, Unlabeled, Labeled };

// Optimizer state for the whole model. Exactly one of the relation-side
// containers is populated, depending on the regime.
struct OptimizerState {
    std::vector<AdaGradState> entities;
    std::vector<AdaGradState> relations_adagrad;  // l2 regime
    std::vector<RdaState> relations_rda;          // std-l1 / mul-l1 regimes
    std::uint64_t global_step = 0;

    bool operator==(const OptimizerState&) const = default;
};

OptimizerState init_optimizer_state(const TrainConfig& config, const KnowledgeBase& kb);

struct ModelArchive {
    ModelParams params;
    OptimizerState opt;
    TrainConfig config;
    std::vector<std::string> entity_names;
    std::vector<std::string> relation_names;
    std::uint64_t next_epoch = 0;
};

// Tab-separated rows: subject, relation, object, and for labeled files a
// fourth field "1" or "-1". Unlabeled rows load with label +1. Auto detects
// the format from each file's first row.
std::vector<LabeledTriplet> load_triple_file(const std::string& path, KnowledgeBase& kb,
                                             TripleFormat format = TripleFormat::Auto);

// Builds one KnowledgeBase from up to three split files (empty paths yield
// empty splits). Vocabularies cover the union of splits.
KnowledgeBase load_dataset(const std::string& train_path, const std::string& valid_path,
                           const std::string& test_path,
                           TripleFormat format = TripleFormat::Auto);

void write_triple_file(const std::string& path, const KnowledgeBase& kb,
                       const std::vector<LabeledTriplet>& triples, bool labeled = true);

// Versioned container: JSON manifest, raw little-endian float64 sections,
// whole-file checksum. load(save(x)) is bit-identical, optimizer state
// included.
void save_model(const std::string& path, const ModelArchive& archive);
ModelArchive load_model(const std::string& path);

}  // namespace kbc
