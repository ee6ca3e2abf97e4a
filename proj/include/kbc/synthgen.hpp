#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "kbc/types.hpp"

namespace kbc {

enum class RelationClass { Symmetric, Antisymmetric, Other };

std::string_view to_string(RelationClass c);
std::optional<RelationClass> relation_class_from_string(std::string_view s);

// How ground-truth matrices are drawn.
//   Factored: truth = thresholded low-rank complex bilinear form whose
//     relation vector is real / imaginary / general per class. Keeps every
//     class invariant exact while giving the data learnable structure, so
//     held-out pairs are predictable.
//   IidBernoulli: independent coin flips per pair (mirrored / one-direction /
//     unconstrained per class). No structure beyond the class property
//     itself, so held-out accuracy is capped near chance.
enum class SynthMechanism { Factored, IidBernoulli };

std::string_view to_string(SynthMechanism m);
std::optional<SynthMechanism> synth_mechanism_from_string(std::string_view s);

struct SynthConfig {
    std::uint32_t n_entities = 50;
    std::vector<RelationClass> classes = {RelationClass::Symmetric,
                                          RelationClass::Antisymmetric,
                                          RelationClass::Other};
    // Fraction of ordered pairs sampled per relation; one entry per relation
    // or a single entry broadcast to all.
    std::vector<double> pair_sample_fraction = {0.913};
    double train_ratio = 0.8;
    // Probability that an unordered pair of an antisymmetric relation has
    // exactly one true direction. At 1.0 the relation is a full tournament,
    // which a purely imaginary relation vector can represent; smaller values
    // add both-false pairs whose rejection needs a symmetric score component.
    double antisym_density = 1.0;
    SynthMechanism mechanism = SynthMechanism::Factored;
    std::uint32_t latent_dim = 5;
    std::uint64_t seed = 0;

    void validate() const;
    double fraction_for(std::size_t relation_index) const;
};

// Ground-truth boolean matrix over ordered entity pairs, diagonal excluded.
struct GroundTruth {
    std::uint32_t n = 0;
    std::vector<std::uint8_t> cells;  // row-major n*n

    explicit GroundTruth(std::uint32_t n_entities)
        : n(n_entities), cells(static_cast<std::size_t>(n_entities) * n_entities, 0) {}
    bool at(std::uint32_t i, std::uint32_t j) const {
        return cells[static_cast<std::size_t>(i) * n + j] != 0;
    }
    void set(std::uint32_t i, std::uint32_t j, bool v) {
        cells[static_cast<std::size_t>(i) * n + j] = v ? 1 : 0;
    }
};

struct SynthResult {
    KnowledgeBase kb;
    std::vector<GroundTruth> truths;  // one per relation, in relation-id order
};

SynthResult generate(const SynthConfig& config);

// Fraction of true ordered pairs whose reverse is also true; 0 when the
// matrix has no true pair.
double sym_score_of_ground_truth(const GroundTruth& m);

}  // namespace kbc
