#include "kbc/optim.hpp"

#include <cmath>
#include <stdexcept>

#include "kbc/objective.hpp"

namespace kbc {

namespace {

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void check_shapes(const ComplexEmbedding& w, std::size_t a, std::size_t b, std::size_t c,
                  std::size_t d) {
    if (w.dim() != a || a != b || b != c || c != d)
        throw std::invalid_argument("optimizer update: shape mismatch");
}

}  // namespace

void adagrad_update(ComplexEmbedding& embedding, AdaGradState& state, const Gradient& grad,
                    double eta) {
    check_shapes(embedding, state.accum_re.size(), state.accum_im.size(), grad.re.size(),
                 grad.im.size());
    const std::size_t d = embedding.dim();
    for (std::size_t k = 0; k < d; ++k) {
        state.accum_re[k] += grad.re[k] * grad.re[k];
        embedding.re[k] -= eta * grad.re[k] / (std::sqrt(state.accum_re[k]) + state.epsilon);
        state.accum_im[k] += grad.im[k] * grad.im[k];
        embedding.im[k] -= eta * grad.im[k] / (std::sqrt(state.accum_im[k]) + state.epsilon);
    }
}

void rda_relation_update(ComplexEmbedding& w, RdaState& state, const Gradient& step_subgrad,
                         double beta, double eta) {
    if (state.step_count == 0)
        throw std::invalid_argument("rda update: step_count must be >= 1");
    check_shapes(w, state.g_sum_re.size(), state.g_sum_im.size(), step_subgrad.re.size(),
                 step_subgrad.im.size());
    const double t = static_cast<double>(state.step_count);
    const std::size_t d = w.dim();
    for (std::size_t k = 0; k < d; ++k) {
        state.g_sum_re[k] += step_subgrad.re[k];
        state.g_sum_im[k] += step_subgrad.im[k];
        double gbar_re = state.g_sum_re[k] / t;
        double gbar_im = state.g_sum_im[k] / t;
        // Thresholds read the time-t values of the *other* part, so both
        // assignments below commit simultaneously.
        double thr_re = beta * std::abs(w.im[k]);
        double thr_im = beta * std::abs(w.re[k]);
        w.re[k] = std::abs(gbar_re) <= thr_re
                      ? 0.0
                      : -eta * t * (gbar_re - thr_re * sign(gbar_re));
        w.im[k] = std::abs(gbar_im) <= thr_im
                      ? 0.0
                      : -eta * t * (gbar_im - thr_im * sign(gbar_im));
    }
}

void rda_std_l1_update(ComplexEmbedding& w, RdaState& state, const Gradient& step_subgrad,
                       double beta, double eta) {
    if (state.step_count == 0)
        throw std::invalid_argument("rda update: step_count must be >= 1");
    check_shapes(w, state.g_sum_re.size(), state.g_sum_im.size(), step_subgrad.re.size(),
                 step_subgrad.im.size());
    const double t = static_cast<double>(state.step_count);
    const std::size_t d = w.dim();
    for (std::size_t k = 0; k < d; ++k) {
        state.g_sum_re[k] += step_subgrad.re[k];
        state.g_sum_im[k] += step_subgrad.im[k];
        double gbar_re = state.g_sum_re[k] / t;
        double gbar_im = state.g_sum_im[k] / t;
        w.re[k] = std::abs(gbar_re) <= beta ? 0.0
                                            : -eta * t * (gbar_re - beta * sign(gbar_re));
        w.im[k] = std::abs(gbar_im) <= beta ? 0.0
                                            : -eta * t * (gbar_im - beta * sign(gbar_im));
    }
}

void step_subgradient(std::span<const LabeledTriplet> batch, const ModelParams& params,
                      const TrainConfig& config, BatchGradients& out) {
    out.clear();
    const std::size_t d = params.dim;
    // no reallocation while slot references are live
    out.entities.reserve(2 * batch.size());
    out.relations.reserve(batch.size());

    auto slot = [d](auto& list, std::uint32_t id) -> Gradient& {
        for (auto& [seen, g] : list)
            if (seen == id) return g;
        list.emplace_back(id, Gradient(d));
        return list.back().second;
    };

    for (const auto& lt : batch) {
        const auto& es = params.entities.at(lt.triplet.subject);
        const auto& wr = params.relations.at(lt.triplet.relation);
        const auto& eo = params.entities.at(lt.triplet.object);
        double f = loss_gradient_factor(score_complex(es, wr, eo), lt.label);

        Gradient& gs = slot(out.entities, lt.triplet.subject);
        Gradient& go = slot(out.entities, lt.triplet.object);
        Gradient& gw = slot(out.relations, lt.triplet.relation);
        for (std::size_t k = 0; k < d; ++k) {
            gw.re[k] += f * (es.re[k] * eo.re[k] + es.im[k] * eo.im[k]);
            gw.im[k] += f * (es.re[k] * eo.im[k] - es.im[k] * eo.re[k]);
            gs.re[k] += f * (wr.re[k] * eo.re[k] + wr.im[k] * eo.im[k]);
            gs.im[k] += f * (wr.re[k] * eo.im[k] - wr.im[k] * eo.re[k]);
            go.re[k] += f * (wr.re[k] * es.re[k] - wr.im[k] * es.im[k]);
            go.im[k] += f * (wr.re[k] * es.im[k] + wr.im[k] * es.re[k]);
        }
    }

    double l2 = 2.0 * config.lambda * (1.0 - config.alpha);
    if (l2 != 0.0) {
        for (auto& [id, g] : out.entities) {
            const auto& e = params.entities[id];
            for (std::size_t k = 0; k < d; ++k) {
                g.re[k] += l2 * e.re[k];
                g.im[k] += l2 * e.im[k];
            }
        }
        for (auto& [id, g] : out.relations) {
            const auto& w = params.relations[id];
            for (std::size_t k = 0; k < d; ++k) {
                g.re[k] += l2 * w.re[k];
                g.im[k] += l2 * w.im[k];
            }
        }
    }
}

}  // namespace kbc
