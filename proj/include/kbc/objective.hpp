#pragma once

#include "kbc/types.hpp"

namespace kbc {

struct RegularizerTerms {
    double r1 = 0.0;      // multiplicative L1 over relation vectors
    double r2 = 0.0;      // squared L2 over all parameters
    double std_l1 = 0.0;  // standard L1 over relation vectors
};

// softplus(-label * score), computed without exponentiating a large
// positive argument.
double logistic_loss(double score, int label);

// d(logistic_loss)/d(score) = -label * sigmoid(-label * score).
double loss_gradient_factor(double score, int label);

// sum_r sum_k |Re(w_r_k) * Im(w_r_k)|
double r1_multiplicative(const std::vector<ComplexEmbedding>& relations);

// sum of squares of every coordinate of every entity and relation vector
double r2_squared_l2(const ModelParams& params);

// sum_r sum_k (|Re(w_r_k)| + |Im(w_r_k)|)
double std_l1(const std::vector<ComplexEmbedding>& relations);

RegularizerTerms regularizer_terms(const ModelParams& params);

// Loss over the labeled set plus lambda * (alpha * L1-term + (1 - alpha) * R2),
// where the L1 term is R1 for mul-l1 and the standard L1 for std-l1.
double objective_value(const std::vector<LabeledTriplet>& omega, const ModelParams& params,
                       const TrainConfig& config);

}  // namespace kbc
