#pragma once

// Fast evaluation of a sample and its angular derivatives.
//
// For d up to kHornerMaxDegree the sample is dehomogenized: with scaled
// coefficients B_k = c_k exp(lsb_k - L), L = max_k lsb_k,
//
//     f(theta) = sin^d(theta) e^L sum_k B_k cot^k(theta)     (|cos| <= |sin|)
//              = cos^d(theta) e^L sum_k B_k tan^(d-k)(theta)  (otherwise)
//
// and both sums are run by Horner in |x| <= 1. Above that degree the
// normalized monomials are generated by a ratio recurrence started at the
// mode of the binomial weights and truncated once they fall below 1e-18.

#include <span>
#include <vector>

#include "kostlan/core.hpp"

namespace kostlan {

class SampleEvaluator {
public:
    static constexpr int kMaxOrder = 5;
    static constexpr int kHornerMaxDegree = 1500;

    explicit SampleEvaluator(const KostlanSample& s);

    int degree() const { return d_; }

    /// f^(order)(theta), order in 0..kMaxOrder.
    double eval(int order, double theta) const;
    void eval_grid(int order, std::span<const double> thetas, std::span<double> out) const;

    /// Euclidean norm of the order-th derivative coefficients; by
    /// Cauchy-Schwarz an upper bound on sup |f^(order)|.
    double coefficient_norm(int order) const { return norms_[order]; }

    /// Absolute bound on the rounding error of eval(order, .).
    double rounding_bound(int order) const { return rounding_[order]; }

    /// B_k for order 0; these doubles define the exact polynomial in cot(theta).
    std::span<const double> scaled_coefficients() const { return scaled_[0]; }

    /// a_d == 0: the line theta = 0 is a root (the root at infinity of p(t)).
    bool root_at_infinity() const { return coeffs_[0].back() == 0.0; }

private:
    double eval_horner(int order, double theta) const;
    double eval_recurrence(int order, double theta) const;

    int d_;
    bool horner_;
    double log_scale_ = 0.0;
    std::vector<double> lsb_;
    std::vector<double> coeffs_[kMaxOrder + 1];
    std::vector<double> scaled_[kMaxOrder + 1];
    std::vector<double> ratio_;  // sqrt((d - k) / (k + 1))
    double norms_[kMaxOrder + 1];
    double rounding_[kMaxOrder + 1];
};

}  // namespace kostlan
