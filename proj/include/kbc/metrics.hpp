#pragma once

#include <iosfwd>
#include <map>
#include <vector>

#include "kbc/types.hpp"

namespace kbc {

struct RankingReport {
    double mrr_raw = 0.0;
    double mrr_filtered = 0.0;
    std::map<int, double> hits_at;  // filtered ranks, n in {1, 3, 10}
    std::size_t n_queries = 0;
};

struct ClassificationReport {
    double overall = 0.0;
    std::size_t n_total = 0;
    // relation id -> (accuracy, count); only relations present in the input
    std::map<RelationId, std::pair<double, std::size_t>> per_relation;
};

struct RelationAnalysisRow {
    RelationId relation = 0;
    std::size_t support = 0;  // |T_r|: positive train triples of r
    double sym = 0.0;
    double nnz_re = 0.0;
    double nnz_im = 0.0;
};

enum class QuerySlot { Subject, Object };

// Sign-of-score truth prediction (score = 0 predicts -1).
ClassificationReport classify(const std::vector<LabeledTriplet>& triples,
                              const ModelParams& params);

// Rank of the held-out entity among all candidate substitutions, with mean
// rank over tie groups. Filtered mode drops candidates that form known-true
// triples (any split), keeping the gold itself.
double rank_entity(const Triplet& positive, QuerySlot missing, const ModelParams& params,
                   const KnowledgeBase& kb, bool filtered);

// Two queries per positive (subject- and object-corrupted). MRR is reported
// raw and filtered; Hits@{1,3,10} use filtered ranks. n_threads = 0 picks
// hardware concurrency.
RankingReport ranking_report(const std::vector<LabeledTriplet>& test_positives,
                             const ModelParams& params, const KnowledgeBase& kb,
                             unsigned n_threads = 1);

// sym(r) over the positives of the given split; relations without positives
// are absent from the map.
std::map<RelationId, double> symmetry_scores(const std::vector<LabeledTriplet>& train);

// Fraction of exactly-nonzero coordinates per relation, split by part.
std::vector<std::pair<double, double>> sparsity_stats(const ModelParams& params);

// One row per relation with at least one positive train triple.
std::vector<RelationAnalysisRow> relation_analysis(const KnowledgeBase& kb,
                                                   const ModelParams& params);

void write_analysis_tsv(std::ostream& os, const KnowledgeBase& kb,
                        const std::vector<RelationAnalysisRow>& rows);

}  // namespace kbc
