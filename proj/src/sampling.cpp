#include "kbc/sampling.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "kbc/common.hpp"

namespace kbc {

NegativeSampler::NegativeSampler(std::uint32_t negatives_per_positive, std::mt19937_64 rng)
    : n_(negatives_per_positive), rng_(std::move(rng)) {
    if (n_ < 1) throw std::invalid_argument("negatives_per_positive must be >= 1");
}

void NegativeSampler::sample_negatives(const Triplet& positive, const KnowledgeBase& kb,
                                       std::vector<LabeledTriplet>& out) {
    if (kb.entities.size() == 0) throw std::invalid_argument("empty entity vocabulary");
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<std::uint32_t> pick(
        0, static_cast<std::uint32_t>(kb.entities.size()) - 1);
    for (std::uint32_t i = 0; i < n_; ++i) {
        Triplet t = positive;
        if (coin(rng_) == 0)
            t.subject = pick(rng_);
        else
            t.object = pick(rng_);
        out.push_back(LabeledTriplet{t, -1});
    }
}

std::vector<LabeledTriplet> NegativeSampler::sample_negatives(const Triplet& positive,
                                                              const KnowledgeBase& kb) {
    std::vector<LabeledTriplet> out;
    out.reserve(n_);
    sample_negatives(positive, kb, out);
    return out;
}

std::vector<std::uint32_t> epoch_permutation(std::size_t n, std::uint64_t seed,
                                             std::uint64_t epoch) {
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    auto rng = make_rng(seed, "shuffle", epoch);
    std::shuffle(order.begin(), order.end(), rng);
    return order;
}

}  // namespace kbc
