#pragma once

#include <random>

#include "kbc/types.hpp"

namespace kbc {

// Corrupts one slot (subject or object, chosen uniformly) of a positive
// triple with an entity drawn uniformly from the vocabulary. Collisions with
// known-true triples are kept (pseudo-negatives).
class NegativeSampler {
public:
    NegativeSampler(std::uint32_t negatives_per_positive, std::mt19937_64 rng);

    void sample_negatives(const Triplet& positive, const KnowledgeBase& kb,
                          std::vector<LabeledTriplet>& out);
    std::vector<LabeledTriplet> sample_negatives(const Triplet& positive,
                                                 const KnowledgeBase& kb);

    std::uint32_t negatives_per_positive() const { return n_; }

private:
    std::uint32_t n_;
    std::mt19937_64 rng_;
};

// Uniform random permutation of [0, n), deterministic in (seed, epoch).
std::vector<std::uint32_t> epoch_permutation(std::size_t n, std::uint64_t seed,
                                             std::uint64_t epoch);

}  // namespace kbc
