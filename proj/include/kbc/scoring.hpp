#pragma once

#include <stdexcept>

#include "kbc/types.hpp"

namespace kbc {

struct Gradient {
    std::vector<double> re;
    std::vector<double> im;

    Gradient() = default;
    explicit Gradient(std::size_t d) : re(d, 0.0), im(d, 0.0) {}
    std::size_t dim() const { return re.size(); }
};

// Partial derivatives of the score with respect to each input vector.
struct ScoreGradients {
    Gradient w;        // d(score)/dRe(w), d(score)/dIm(w)
    Gradient subject;  // d(score)/dRe(e_s), d(score)/dIm(e_s)
    Gradient object;   // d(score)/dRe(e_o), d(score)/dIm(e_o)

    explicit ScoreGradients(std::size_t d) : w(d), subject(d), object(d) {}
};

inline void check_dims(const ComplexEmbedding& es, const ComplexEmbedding& wr,
                       const ComplexEmbedding& eo) {
    if (es.dim() != wr.dim() || wr.dim() != eo.dim() || es.re.size() != es.im.size() ||
        wr.re.size() != wr.im.size() || eo.re.size() != eo.im.size())
        throw std::invalid_argument("score: dimension mismatch");
}

// Re(<w, e_s, conj(e_o)>): the four-term trilinear decomposition.
// Grouped so that zero imaginary parts reduce it term-for-term to the
// DistMult form below (the two agree bit-exactly in that case).
inline double score_complex(const ComplexEmbedding& es, const ComplexEmbedding& wr,
                            const ComplexEmbedding& eo) {
    check_dims(es, wr, eo);
    double acc = 0.0;
    const std::size_t d = es.dim();
    for (std::size_t k = 0; k < d; ++k) {
        double sym = es.re[k] * eo.re[k] + es.im[k] * eo.im[k];
        double asym = es.re[k] * eo.im[k] - es.im[k] * eo.re[k];
        acc += wr.re[k] * sym + wr.im[k] * asym;
    }
    return acc;
}

// DistMult restriction: only the real parts participate.
inline double score_distmult(const ComplexEmbedding& es, const ComplexEmbedding& wr,
                             const ComplexEmbedding& eo) {
    check_dims(es, wr, eo);
    double acc = 0.0;
    const std::size_t d = es.dim();
    for (std::size_t k = 0; k < d; ++k) {
        double sym = es.re[k] * eo.re[k];
        acc += wr.re[k] * sym;
    }
    return acc;
}

inline void score_gradients_into(const ComplexEmbedding& es, const ComplexEmbedding& wr,
                                 const ComplexEmbedding& eo, ScoreGradients& out) {
    check_dims(es, wr, eo);
    const std::size_t d = es.dim();
    if (out.w.dim() != d)
        throw std::invalid_argument("score_gradients: output dimension mismatch");
    for (std::size_t k = 0; k < d; ++k) {
        out.w.re[k] = es.re[k] * eo.re[k] + es.im[k] * eo.im[k];
        out.w.im[k] = es.re[k] * eo.im[k] - es.im[k] * eo.re[k];
        out.subject.re[k] = wr.re[k] * eo.re[k] + wr.im[k] * eo.im[k];
        out.subject.im[k] = wr.re[k] * eo.im[k] - wr.im[k] * eo.re[k];
        out.object.re[k] = wr.re[k] * es.re[k] - wr.im[k] * es.im[k];
        out.object.im[k] = wr.re[k] * es.im[k] + wr.im[k] * es.re[k];
    }
}

inline ScoreGradients score_gradients(const ComplexEmbedding& es, const ComplexEmbedding& wr,
                                      const ComplexEmbedding& eo) {
    ScoreGradients out(es.dim());
    score_gradients_into(es, wr, eo, out);
    return out;
}

}  // namespace kbc
