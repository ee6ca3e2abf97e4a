#include "kbc/metrics.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

#include "kbc/common.hpp"
#include "kbc/scoring.hpp"

namespace kbc {

ClassificationReport classify(const std::vector<LabeledTriplet>& triples,
                              const ModelParams& params) {
    if (triples.empty()) throw std::invalid_argument("classify: empty triple set");
    ClassificationReport rep;
    std::map<RelationId, std::pair<std::size_t, std::size_t>> counts;  // correct, total
    std::size_t correct = 0;
    for (const auto& lt : triples) {
        double s = score_complex(params.entities.at(lt.triplet.subject),
                                 params.relations.at(lt.triplet.relation),
                                 params.entities.at(lt.triplet.object));
        int pred = s > 0.0 ? 1 : -1;
        auto& [c, t] = counts[lt.triplet.relation];
        ++t;
        if (pred == lt.label) {
            ++c;
            ++correct;
        }
    }
    rep.n_total = triples.size();
    rep.overall = static_cast<double>(correct) / static_cast<double>(rep.n_total);
    for (const auto& [rel, ct] : counts)
        rep.per_relation[rel] = {static_cast<double>(ct.first) / static_cast<double>(ct.second),
                                 ct.second};
    return rep;
}

namespace {

struct RankPair {
    double raw = 0.0;
    double filtered = 0.0;
};

// Scores every candidate substitution with the query reduced to two d-vectors,
// so each candidate costs one fused dot product.
RankPair rank_both(const Triplet& positive, QuerySlot missing, const ModelParams& params,
                   const KnowledgeBase& kb) {
    const std::size_t d = params.dim;
    EntityId gold = missing == QuerySlot::Subject ? positive.subject : positive.object;
    if (gold >= params.entities.size())
        throw std::invalid_argument("rank_entity: gold entity not in vocabulary");
    if (positive.relation >= params.relations.size())
        throw std::invalid_argument("rank_entity: relation not in vocabulary");

    const auto& wr = params.relations[positive.relation];
    std::vector<double> coef_re(d), coef_im(d);
    if (missing == QuerySlot::Object) {
        const auto& es = params.entities.at(positive.subject);
        for (std::size_t k = 0; k < d; ++k) {
            coef_re[k] = wr.re[k] * es.re[k] - wr.im[k] * es.im[k];
            coef_im[k] = wr.re[k] * es.im[k] + wr.im[k] * es.re[k];
        }
    } else {
        const auto& eo = params.entities.at(positive.object);
        for (std::size_t k = 0; k < d; ++k) {
            coef_re[k] = wr.re[k] * eo.re[k] + wr.im[k] * eo.im[k];
            coef_im[k] = wr.re[k] * eo.im[k] - wr.im[k] * eo.re[k];
        }
    }
    auto candidate_score = [&](EntityId c) {
        const auto& e = params.entities[c];
        double acc = 0.0;
        for (std::size_t k = 0; k < d; ++k)
            acc += coef_re[k] * e.re[k] + coef_im[k] * e.im[k];
        return acc;
    };

    double gold_score = candidate_score(gold);
    std::size_t higher_raw = 0, tied_raw = 0, higher_f = 0, tied_f = 0;
    Triplet probe = positive;
    const auto n_entities = static_cast<EntityId>(params.entities.size());
    for (EntityId c = 0; c < n_entities; ++c) {
        if (c == gold) continue;
        double s = candidate_score(c);
        bool higher = s > gold_score;
        bool tied = s == gold_score;
        if (!higher && !tied) continue;
        if (higher)
            ++higher_raw;
        else
            ++tied_raw;
        if (missing == QuerySlot::Subject)
            probe.subject = c;
        else
            probe.object = c;
        if (!kb.is_true(probe)) {
            if (higher)
                ++higher_f;
            else
                ++tied_f;
        }
    }
    RankPair out;
    out.raw = 1.0 + static_cast<double>(higher_raw) + 0.5 * static_cast<double>(tied_raw);
    out.filtered = 1.0 + static_cast<double>(higher_f) + 0.5 * static_cast<double>(tied_f);
    return out;
}

}  // namespace

double rank_entity(const Triplet& positive, QuerySlot missing, const ModelParams& params,
                   const KnowledgeBase& kb, bool filtered) {
    RankPair rp = rank_both(positive, missing, params, kb);
    return filtered ? rp.filtered : rp.raw;
}

RankingReport ranking_report(const std::vector<LabeledTriplet>& test_positives,
                             const ModelParams& params, const KnowledgeBase& kb,
                             unsigned n_threads) {
    if (test_positives.empty()) throw std::invalid_argument("ranking_report: empty test set");
    for (const auto& lt : test_positives) {
        if (lt.triplet.subject >= params.entities.size() ||
            lt.triplet.object >= params.entities.size() ||
            lt.triplet.relation >= params.relations.size())
            throw std::invalid_argument("ranking_report: triple ids outside the vocabulary");
    }
    const std::size_t n = test_positives.size();
    std::vector<RankPair> subj_ranks(n), obj_ranks(n);
    parallel_chunks(n, n_threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const Triplet& t = test_positives[i].triplet;
            subj_ranks[i] = rank_both(t, QuerySlot::Subject, params, kb);
            obj_ranks[i] = rank_both(t, QuerySlot::Object, params, kb);
        }
    });

    RankingReport rep;
    rep.n_queries = 2 * n;
    double sum_raw = 0.0, sum_f = 0.0;
    std::map<int, std::size_t> hit_counts{{1, 0}, {3, 0}, {10, 0}};
    auto absorb = [&](const RankPair& rp) {
        sum_raw += 1.0 / rp.raw;
        sum_f += 1.0 / rp.filtered;
        for (auto& [k, c] : hit_counts)
            if (rp.filtered <= static_cast<double>(k)) ++c;
    };
    for (std::size_t i = 0; i < n; ++i) {
        absorb(subj_ranks[i]);
        absorb(obj_ranks[i]);
    }
    rep.mrr_raw = sum_raw / static_cast<double>(rep.n_queries);
    rep.mrr_filtered = sum_f / static_cast<double>(rep.n_queries);
    for (const auto& [k, c] : hit_counts)
        rep.hits_at[k] = static_cast<double>(c) / static_cast<double>(rep.n_queries);
    return rep;
}

std::map<RelationId, double> symmetry_scores(const std::vector<LabeledTriplet>& train) {
    std::unordered_set<std::uint64_t> positives;
    auto key = [](const Triplet& t) {
        return (static_cast<std::uint64_t>(t.subject) << 42) |
               (static_cast<std::uint64_t>(t.relation) << 21) |
               static_cast<std::uint64_t>(t.object);
    };
    for (const auto& lt : train)
        if (lt.label == 1) positives.insert(key(lt.triplet));

    std::map<RelationId, std::pair<std::size_t, std::size_t>> counts;  // mirrored, total
    for (const auto& lt : train) {
        if (lt.label != 1) continue;
        auto& [m, t] = counts[lt.triplet.relation];
        ++t;
        Triplet rev{lt.triplet.object, lt.triplet.relation, lt.triplet.subject};
        if (positives.count(key(rev))) ++m;
    }
    std::map<RelationId, double> out;
    for (const auto& [rel, mt] : counts)
        out[rel] = static_cast<double>(mt.first) / static_cast<double>(mt.second);
    return out;
}

std::vector<std::pair<double, double>> sparsity_stats(const ModelParams& params) {
    std::vector<std::pair<double, double>> out;
    out.reserve(params.relations.size());
    for (const auto& w : params.relations) {
        std::size_t nz_re = 0, nz_im = 0;
        for (double x : w.re)
            if (x != 0.0) ++nz_re;
        for (double x : w.im)
            if (x != 0.0) ++nz_im;
        double d = static_cast<double>(w.dim());
        out.emplace_back(static_cast<double>(nz_re) / d, static_cast<double>(nz_im) / d);
    }
    return out;
}

std::vector<RelationAnalysisRow> relation_analysis(const KnowledgeBase& kb,
                                                   const ModelParams& params) {
    auto sym = symmetry_scores(kb.train);
    auto nnz = sparsity_stats(params);
    std::vector<RelationAnalysisRow> rows;
    std::map<RelationId, std::size_t> support;
    for (const auto& lt : kb.train)
        if (lt.label == 1) ++support[lt.triplet.relation];
    for (const auto& [rel, s] : sym) {
        RelationAnalysisRow row;
        row.relation = rel;
        row.support = support[rel];
        row.sym = s;
        row.nnz_re = nnz.at(rel).first;
        row.nnz_im = nnz.at(rel).second;
        rows.push_back(row);
    }
    return rows;
}

void write_analysis_tsv(std::ostream& os, const KnowledgeBase& kb,
                        const std::vector<RelationAnalysisRow>& rows) {
    os << "relation\tsupport\tsym\tnnz_re\tnnz_im\n";
    char buf[64];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.6f\t%.6f\t%.6f", r.sym, r.nnz_re, r.nnz_im);
        os << kb.relations.name(r.relation) << '\t' << r.support << '\t' << buf << '\n';
    }
}

}  // namespace kbc
