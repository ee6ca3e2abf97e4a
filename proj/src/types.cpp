#include "kbc/types.hpp"

#include <random>
#include <stdexcept>

#include "kbc/common.hpp"

namespace kbc {

std::uint32_t Vocabulary::add(const std::string& name) {
    auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    auto id = static_cast<std::uint32_t>(names_.size());
    names_.push_back(name);
    index_.emplace(name, id);
    return id;
}

std::optional<std::uint32_t> Vocabulary::find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

const std::string& Vocabulary::name(std::uint32_t id) const {
    if (id >= names_.size()) throw std::out_of_range("vocabulary id out of range");
    return names_[id];
}

std::uint64_t KnowledgeBase::pack(const Triplet& t) const {
    // 21 bits per field; rebuild_true_set enforces the vocabulary bound.
    return (static_cast<std::uint64_t>(t.subject) << 42) |
           (static_cast<std::uint64_t>(t.relation) << 21) |
           static_cast<std::uint64_t>(t.object);
}

void KnowledgeBase::rebuild_true_set() {
    if (entities.size() >= kMaxVocab || relations.size() >= kMaxVocab)
        throw std::invalid_argument("vocabulary too large for packed triple keys");
    true_set.clear();
    for (const auto* split : {&train, &valid, &test}) {
        for (const auto& lt : *split) {
            if (lt.label == 1) true_set.insert(pack(lt.triplet));
        }
    }
}

std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::L2Only: return "l2";
        case Regime::StdL1: return "std-l1";
        case Regime::MulL1: return "mul-l1";
    }
    return "?";
}

std::optional<Regime> regime_from_string(std::string_view s) {
    if (s == "l2") return Regime::L2Only;
    if (s == "std-l1") return Regime::StdL1;
    if (s == "mul-l1") return Regime::MulL1;
    return std::nullopt;
}

void TrainConfig::validate() const {
    if (dim < 1) throw std::invalid_argument("dim must be >= 1");
    if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
    if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must be in [0, 1]");
    if (eta <= 0.0) throw std::invalid_argument("eta must be > 0");
    if (negatives_per_positive < 1)
        throw std::invalid_argument("negatives_per_positive must be >= 1");
    if (minibatch < 1) throw std::invalid_argument("minibatch must be >= 1");
    if (regime == Regime::L2Only && alpha != 0.0)
        throw std::invalid_argument("regime l2 requires alpha = 0");
}

KnowledgeBase build_vocab(const std::vector<std::array<std::string, 3>>& raw_triples) {
    if (raw_triples.empty()) throw std::invalid_argument("build_vocab: empty triple list");
    KnowledgeBase kb;
    for (const auto& row : raw_triples) {
        kb.entities.add(row[0]);
        kb.relations.add(row[1]);
        kb.entities.add(row[2]);
    }
    return kb;
}

ModelParams init_params(const TrainConfig& config, const KnowledgeBase& kb,
                        std::uint64_t rng_seed) {
    config.validate();
    auto rng = make_rng(rng_seed, "init");
    // Unit-variance init keeps relation subgradients well above the RDA
    // thresholds beta = lambda * alpha that the L1 regimes use; with a
    // small-variance init the standard-L1 updates zero every relation
    // coordinate on the first step and training never recovers.
    std::normal_distribution<double> gauss(0.0, 1.0);

    ModelParams params;
    params.dim = config.dim;
    auto draw = [&](std::size_t count) {
        std::vector<ComplexEmbedding> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            ComplexEmbedding e(config.dim);
            for (auto& x : e.re) x = gauss(rng);
            for (auto& x : e.im) x = gauss(rng);
            out.push_back(std::move(e));
        }
        return out;
    };
    params.entities = draw(kb.entities.size());
    params.relations = draw(kb.relations.size());
    return params;
}

}  // namespace kbc
