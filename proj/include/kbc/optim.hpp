#pragma once

#include <cstdint>
#include <span>

#include "kbc/scoring.hpp"
#include "kbc/types.hpp"

namespace kbc {

struct AdaGradState {
    std::vector<double> accum_re;
    std::vector<double> accum_im;
    double epsilon = 1e-8;

    AdaGradState() = default;
    explicit AdaGradState(std::size_t d) : accum_re(d, 0.0), accum_im(d, 0.0) {}
    bool operator==(const AdaGradState&) const = default;
};

// Dual-averaging state for one relation vector: running *sums* of
// subgradients (average = sum / step_count) and the step clock.
struct RdaState {
    std::vector<double> g_sum_re;
    std::vector<double> g_sum_im;
    std::uint64_t step_count = 0;

    RdaState() = default;
    explicit RdaState(std::size_t d) : g_sum_re(d, 0.0), g_sum_im(d, 0.0) {}
    bool operator==(const RdaState&) const = default;
};

void adagrad_update(ComplexEmbedding& embedding, AdaGradState& state, const Gradient& grad,
                    double eta);

// RDA step with the multiplicative L1 threshold: a coordinate's real part is
// zeroed when |avg grad| <= beta * |Im|, and vice versa. Both parts are
// decided from the pre-update values and committed together. The caller must
// have incremented state.step_count for this step; `step_subgrad` is this
// step's subgradient (loss + L2 only) and is folded into the running sum
// here. Thresholded coordinates become exact 0.0.
void rda_relation_update(ComplexEmbedding& w, RdaState& state, const Gradient& step_subgrad,
                         double beta, double eta);

// Classical RDA soft threshold: the coupled threshold is replaced by the
// constant beta, applied to the real and imaginary parts independently.
void rda_std_l1_update(ComplexEmbedding& w, RdaState& state, const Gradient& step_subgrad,
                       double beta, double eta);

// Per-touched-parameter subgradients for one optimizer step.
struct BatchGradients {
    std::vector<std::pair<EntityId, Gradient>> entities;
    std::vector<std::pair<RelationId, Gradient>> relations;

    void clear() {
        entities.clear();
        relations.clear();
    }
};

// Subgradient of (loss over the batch) + lambda*(1-alpha)*||theta||^2
// restricted to the parameters the batch touches. L1 terms contribute
// nothing here; they enter through the RDA thresholds.
void step_subgradient(std::span<const LabeledTriplet> batch, const ModelParams& params,
                      const TrainConfig& config, BatchGradients& out);

inline BatchGradients step_subgradient(std::span<const LabeledTriplet> batch,
                                       const ModelParams& params, const TrainConfig& config) {
    BatchGradients out;
    step_subgradient(batch, params, config, out);
    return out;
}

}  // namespace kbc
