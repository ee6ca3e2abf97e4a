#include "kbc/objective.hpp"

#include <cmath>
#include <stdexcept>

#include "kbc/scoring.hpp"

namespace kbc {

namespace {

void check_label(int label) {
    if (label != 1 && label != -1) throw std::invalid_argument("label must be +1 or -1");
}

double stable_softplus(double x) {
    // log(1 + exp(x)) without overflow for large x.
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

double stable_sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

}  // namespace

double logistic_loss(double score, int label) {
    check_label(label);
    return stable_softplus(-static_cast<double>(label) * score);
}

double loss_gradient_factor(double score, int label) {
    check_label(label);
    double y = static_cast<double>(label);
    return -y * stable_sigmoid(-y * score);
}

double r1_multiplicative(const std::vector<ComplexEmbedding>& relations) {
    double acc = 0.0;
    for (const auto& w : relations)
        for (std::size_t k = 0; k < w.dim(); ++k) acc += std::abs(w.re[k] * w.im[k]);
    return acc;
}

double r2_squared_l2(const ModelParams& params) {
    double acc = 0.0;
    for (const auto* group : {&params.entities, &params.relations}) {
        for (const auto& e : *group) {
            for (double x : e.re) acc += x * x;
            for (double x : e.im) acc += x * x;
        }
    }
    return acc;
}

double std_l1(const std::vector<ComplexEmbedding>& relations) {
    double acc = 0.0;
    for (const auto& w : relations)
        for (std::size_t k = 0; k < w.dim(); ++k)
            acc += std::abs(w.re[k]) + std::abs(w.im[k]);
    return acc;
}

RegularizerTerms regularizer_terms(const ModelParams& params) {
    RegularizerTerms t;
    t.r1 = r1_multiplicative(params.relations);
    t.r2 = r2_squared_l2(params);
    t.std_l1 = std_l1(params.relations);
    return t;
}

double objective_value(const std::vector<LabeledTriplet>& omega, const ModelParams& params,
                       const TrainConfig& config) {
    config.validate();
    double loss = 0.0;
    for (const auto& lt : omega) {
        double s = score_complex(params.entities.at(lt.triplet.subject),
                                 params.relations.at(lt.triplet.relation),
                                 params.entities.at(lt.triplet.object));
        loss += logistic_loss(s, lt.label);
    }
    double l1 = config.regime == Regime::StdL1 ? std_l1(params.relations)
                                               : r1_multiplicative(params.relations);
    return loss + config.lambda * (config.alpha * l1 +
                                   (1.0 - config.alpha) * r2_squared_l2(params));
}

}  // namespace kbc
