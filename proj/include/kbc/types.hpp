#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace kbc {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;

struct Triplet {
    EntityId subject = 0;
    RelationId relation = 0;
    EntityId object = 0;

    bool operator==(const Triplet&) const = default;
};

// label is +1 (true) or -1 (false).
struct LabeledTriplet {
    Triplet triplet;
    int label = 1;

    bool operator==(const LabeledTriplet&) const = default;
};

// One complex vector stored as split real/imaginary coordinate arrays.
struct ComplexEmbedding {
    std::vector<double> re;
    std::vector<double> im;

    ComplexEmbedding() = default;
    explicit ComplexEmbedding(std::size_t d) : re(d, 0.0), im(d, 0.0) {}

    std::size_t dim() const { return re.size(); }
    bool operator==(const ComplexEmbedding&) const = default;
};

struct ModelParams {
    std::vector<ComplexEmbedding> entities;
    std::vector<ComplexEmbedding> relations;
    std::size_t dim = 0;

    bool operator==(const ModelParams&) const = default;
};

class Vocabulary {
public:
    // Returns the id of `name`, inserting it at the next dense id if new.
    std::uint32_t add(const std::string& name);
    std::optional<std::uint32_t> find(const std::string& name) const;
    const std::string& name(std::uint32_t id) const;
    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }

    bool operator==(const Vocabulary& other) const { return names_ == other.names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::uint32_t> index_;
};

struct KnowledgeBase {
    Vocabulary entities;
    Vocabulary relations;
    std::vector<LabeledTriplet> train;
    std::vector<LabeledTriplet> valid;
    std::vector<LabeledTriplet> test;

    // Membership over all label-+1 triples across splits (filtered ranking).
    std::unordered_set<std::uint64_t> true_set;

    static constexpr std::uint32_t kMaxVocab = 1u << 21;

    std::uint64_t pack(const Triplet& t) const;
    bool is_true(const Triplet& t) const { return true_set.count(pack(t)) != 0; }
    void rebuild_true_set();
};

enum class Regime { L2Only, StdL1, MulL1 };

std::string_view to_string(Regime r);
std::optional<Regime> regime_from_string(std::string_view s);

struct TrainConfig {
    std::size_t dim = 200;
    double lambda = 0.0;
    double alpha = 0.0;
    double eta = 0.1;
    std::uint64_t epochs = 500;
    std::uint32_t negatives_per_positive = 10;
    Regime regime = Regime::L2Only;
    std::uint32_t minibatch = 1;
    std::uint64_t seed = 0;
    // RDA step clocks are per-relation by default; true switches to the
    // global optimizer step count.
    bool rda_global_clock = false;

    // Throws std::invalid_argument on out-of-range fields or an
    // inconsistent regime/alpha combination.
    void validate() const;
};

// Builds entity/relation vocabularies from (subject, relation, object) rows,
// assigning dense ids in first-appearance order. Splits are left empty.
KnowledgeBase build_vocab(const std::vector<std::array<std::string, 3>>& raw_triples);

// Gaussian N(0, 1) init of every coordinate, deterministic per seed.
ModelParams init_params(const TrainConfig& config, const KnowledgeBase& kb,
                        std::uint64_t rng_seed);

}  // namespace kbc
