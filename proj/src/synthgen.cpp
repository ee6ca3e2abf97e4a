#include "kbc/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "kbc/common.hpp"

namespace kbc {

std::string_view to_string(RelationClass c) {
    switch (c) {
        case RelationClass::Symmetric: return "sym";
        case RelationClass::Antisymmetric: return "anti";
        case RelationClass::Other: return "other";
    }
    return "?";
}

std::optional<RelationClass> relation_class_from_string(std::string_view s) {
    if (s == "sym" || s == "symmetric") return RelationClass::Symmetric;
    if (s == "anti" || s == "antisymmetric") return RelationClass::Antisymmetric;
    if (s == "other") return RelationClass::Other;
    return std::nullopt;
}

std::string_view to_string(SynthMechanism m) {
    return m == SynthMechanism::Factored ? "factored" : "iid";
}

std::optional<SynthMechanism> synth_mechanism_from_string(std::string_view s) {
    if (s == "factored") return SynthMechanism::Factored;
    if (s == "iid" || s == "bernoulli") return SynthMechanism::IidBernoulli;
    return std::nullopt;
}

void SynthConfig::validate() const {
    if (n_entities < 2) throw std::invalid_argument("synth: n_entities must be >= 2");
    if (classes.empty()) throw std::invalid_argument("synth: at least one relation class");
    if (pair_sample_fraction.empty() ||
        (pair_sample_fraction.size() != 1 && pair_sample_fraction.size() != classes.size()))
        throw std::invalid_argument("synth: one sample fraction, or one per relation");
    for (double f : pair_sample_fraction)
        if (!(f > 0.0 && f <= 1.0))
            throw std::invalid_argument("synth: sample fractions must be in (0, 1]");
    if (!(train_ratio > 0.0 && train_ratio < 1.0))
        throw std::invalid_argument("synth: train_ratio must be in (0, 1)");
    if (!(antisym_density >= 0.0 && antisym_density <= 1.0))
        throw std::invalid_argument("synth: antisym_density must be in [0, 1]");
    if (latent_dim < 1) throw std::invalid_argument("synth: latent_dim must be >= 1");
}

double SynthConfig::fraction_for(std::size_t relation_index) const {
    return pair_sample_fraction.size() == 1 ? pair_sample_fraction[0]
                                            : pair_sample_fraction.at(relation_index);
}

namespace {

GroundTruth draw_iid(const SynthConfig& cfg, RelationClass cls, std::mt19937_64& rng) {
    const std::uint32_t n = cfg.n_entities;
    GroundTruth m(n);
    std::bernoulli_distribution half(0.5);
    switch (cls) {
        case RelationClass::Symmetric:
            for (std::uint32_t i = 0; i < n; ++i)
                for (std::uint32_t j = i + 1; j < n; ++j) {
                    bool v = half(rng);
                    m.set(i, j, v);
                    m.set(j, i, v);
                }
            break;
        case RelationClass::Antisymmetric: {
            std::bernoulli_distribution one_true(cfg.antisym_density);
            for (std::uint32_t i = 0; i < n; ++i)
                for (std::uint32_t j = i + 1; j < n; ++j) {
                    if (one_true(rng)) {
                        if (half(rng))
                            m.set(i, j, true);
                        else
                            m.set(j, i, true);
                    }
                }
            break;
        }
        case RelationClass::Other:
            for (std::uint32_t i = 0; i < n; ++i)
                for (std::uint32_t j = 0; j < n; ++j)
                    if (i != j) m.set(i, j, half(rng));
            break;
    }
    return m;
}

// Thresholded bilinear form over latent complex entity vectors. The relation
// vector is real for symmetric relations (score exactly symmetric),
// imaginary for antisymmetric ones (score exactly antisymmetric, so a
// positive threshold can never admit both directions of a pair), and a
// general complex vector otherwise.
GroundTruth draw_factored(const SynthConfig& cfg, RelationClass cls, std::mt19937_64& rng,
                          const std::vector<double>& z_re, const std::vector<double>& z_im) {
    const std::uint32_t n = cfg.n_entities;
    const std::uint32_t m_dim = cfg.latent_dim;
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<double> w_re(m_dim, 0.0), w_im(m_dim, 0.0);
    if (cls != RelationClass::Antisymmetric)
        for (auto& x : w_re) x = gauss(rng);
    if (cls != RelationClass::Symmetric)
        for (auto& x : w_im) x = gauss(rng);

    auto score = [&](std::uint32_t i, std::uint32_t j) {
        double acc = 0.0;
        const double* sre = &z_re[static_cast<std::size_t>(i) * m_dim];
        const double* sim = &z_im[static_cast<std::size_t>(i) * m_dim];
        const double* ore = &z_re[static_cast<std::size_t>(j) * m_dim];
        const double* oim = &z_im[static_cast<std::size_t>(j) * m_dim];
        for (std::uint32_t k = 0; k < m_dim; ++k)
            acc += w_re[k] * (sre[k] * ore[k] + sim[k] * oim[k]) +
                   w_im[k] * (sre[k] * oim[k] - sim[k] * ore[k]);
        return acc;
    };

    std::vector<double> scores;
    scores.reserve(static_cast<std::size_t>(n) * (n - 1));
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 0; j < n; ++j)
            if (i != j) scores.push_back(score(i, j));

    double density = cls == RelationClass::Antisymmetric ? cfg.antisym_density / 2.0 : 0.5;
    auto n_true = static_cast<std::size_t>(
        std::llround(density * static_cast<double>(scores.size())));
    n_true = std::min(n_true, scores.size());

    GroundTruth truth(n);
    if (n_true == 0) return truth;
    std::vector<double> sorted = scores;
    std::nth_element(sorted.begin(), sorted.begin() + (scores.size() - n_true), sorted.end());
    double tau = sorted[scores.size() - n_true];  // strictly-above threshold
    if (cls == RelationClass::Antisymmetric && !(tau > 0.0))
        throw std::runtime_error("synth: antisymmetric threshold not positive; "
                                 "lower antisym_density");

    std::size_t idx = 0;
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 0; j < n; ++j)
            if (i != j) truth.set(i, j, scores[idx++] > tau);
    return truth;
}

}  // namespace

SynthResult generate(const SynthConfig& cfg) {
    cfg.validate();
    const std::uint32_t n = cfg.n_entities;

    SynthResult out;
    for (std::uint32_t i = 0; i < n; ++i) out.kb.entities.add("e" + std::to_string(i));
    for (std::size_t r = 0; r < cfg.classes.size(); ++r)
        out.kb.relations.add("r" + std::to_string(r) + "_" +
                             std::string(to_string(cfg.classes[r])));

    // Shared latent entity vectors (factored mechanism only).
    std::vector<double> z_re, z_im;
    if (cfg.mechanism == SynthMechanism::Factored) {
        auto rng = make_rng(cfg.seed, "synth-latent");
        std::normal_distribution<double> gauss(0.0, 1.0);
        z_re.resize(static_cast<std::size_t>(n) * cfg.latent_dim);
        z_im.resize(z_re.size());
        for (auto& x : z_re) x = gauss(rng);
        for (auto& x : z_im) x = gauss(rng);
    }

    struct SampledPair {
        RelationId rel;
        std::uint32_t i, j;
    };
    std::vector<SampledPair> pool;

    for (std::size_t r = 0; r < cfg.classes.size(); ++r) {
        auto rng = make_rng(cfg.seed, "synth-truth", r);
        GroundTruth truth = cfg.mechanism == SynthMechanism::Factored
                                ? draw_factored(cfg, cfg.classes[r], rng, z_re, z_im)
                                : draw_iid(cfg, cfg.classes[r], rng);
        out.truths.push_back(std::move(truth));

        std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
        pairs.reserve(static_cast<std::size_t>(n) * (n - 1));
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = 0; j < n; ++j)
                if (i != j) pairs.emplace_back(i, j);

        auto pair_rng = make_rng(cfg.seed, "synth-pairs", r);
        std::shuffle(pairs.begin(), pairs.end(), pair_rng);
        auto take = static_cast<std::size_t>(
            std::llround(cfg.fraction_for(r) * static_cast<double>(pairs.size())));
        take = std::min(take, pairs.size());
        for (std::size_t p = 0; p < take; ++p)
            pool.push_back({static_cast<RelationId>(r), pairs[p].first, pairs[p].second});
    }

    auto split_rng = make_rng(cfg.seed, "synth-split");
    std::shuffle(pool.begin(), pool.end(), split_rng);

    auto n_train = static_cast<std::size_t>(
        std::llround(cfg.train_ratio * static_cast<double>(pool.size())));
    n_train = std::min(n_train, pool.size());
    std::size_t n_valid = (pool.size() - n_train) / 2;

    for (std::size_t p = 0; p < pool.size(); ++p) {
        const auto& sp = pool[p];
        LabeledTriplet lt{Triplet{sp.i, sp.rel, sp.j},
                          out.truths[sp.rel].at(sp.i, sp.j) ? 1 : -1};
        if (p < n_train)
            out.kb.train.push_back(lt);
        else if (p < n_train + n_valid)
            out.kb.valid.push_back(lt);
        else
            out.kb.test.push_back(lt);
    }
    out.kb.rebuild_true_set();
    return out;
}

double sym_score_of_ground_truth(const GroundTruth& m) {
    std::size_t total = 0, mirrored = 0;
    for (std::uint32_t i = 0; i < m.n; ++i)
        for (std::uint32_t j = 0; j < m.n; ++j) {
            if (i == j || !m.at(i, j)) continue;
            ++total;
            if (m.at(j, i)) ++mirrored;
        }
    if (total == 0) return 0.0;
    return static_cast<double>(mirrored) / static_cast<double>(total);
}

}  // namespace kbc
