#pragma once

// Exact univariate polynomials over Z and Sturm sequences.
//
// Double-precision coefficients are dyadic rationals, so a polynomial with
// double coefficients is, up to a common power of two, an integer polynomial.
// Root counts computed here are exact for that polynomial.

#include <gmpxx.h>

#include <limits>
#include <span>
#include <vector>

namespace kostlan {

class IntegerPolynomial {
public:
    IntegerPolynomial() = default;
    /// Ascending coefficients; leading zeros are trimmed.
    explicit IntegerPolynomial(std::vector<mpz_class> coeffs);

    /// Scales the dyadic values c_k by a common power of two so that all
    /// become integers. Non-finite input is rejected.
    static IntegerPolynomial from_dyadic(std::span<const double> coeffs);

    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const mpz_class& leading() const { return coeffs_.back(); }
    const mpz_class& operator[](std::size_t k) const { return coeffs_[k]; }
    std::span<const mpz_class> coeffs() const { return coeffs_; }

    IntegerPolynomial derivative() const;

    /// Sign of p(t) for a finite double t, computed exactly.
    int sign_at(double t) const;
    /// Sign of p(t) as t -> +inf or -inf.
    int sign_at_infinity(bool positive) const;

private:
    void trim();
    std::vector<mpz_class> coeffs_;
};

/// Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b.
IntegerPolynomial pseudo_remainder(const IntegerPolynomial& a, const IntegerPolynomial& b);

/// Number of distinct real roots of p.
///
/// When the subresultant chain of (p, p') is regular (every degree drop is 1,
/// the generic case) the Sturm count depends only on the signs of the chain's
/// leading coefficients. Those are computed modulo enough 50-bit primes to
/// exceed their Hadamard bound and the signs are recovered exactly from the
/// residues. Irregular chains fall back to the integer chain.
int count_distinct_real_roots(const IntegerPolynomial& p);

/// Leading coefficients of the subresultant chain of (p, p') by the modular
/// route; empty when the chain is irregular. Exposed for cross-checking.
std::vector<int> modular_chain_signs(const IntegerPolynomial& p);

/// Sturm sequence of p, stored as the subresultant remainder sequence plus the
/// sign that turns each member into the corresponding Sturm polynomial. The
/// subresultant scaling keeps coefficient growth linear in the chain index.
class SturmSequence {
public:
    explicit SturmSequence(const IntegerPolynomial& p);

    static constexpr double kPosInf = std::numeric_limits<double>::infinity();
    static constexpr double kNegInf = -std::numeric_limits<double>::infinity();

    /// Sign variations of the chain at t (t may be +-infinity).
    int variations(double t) const;

    /// Number of distinct real roots in (lo, hi], lo < hi.
    int count_roots(double lo, double hi) const;
    int count_real_roots() const { return count_roots(kNegInf, kPosInf); }

    /// True when gcd(p, p') is constant, i.e. every root is simple.
    bool squarefree() const;

    std::size_t length() const { return chain_.size(); }
    const IntegerPolynomial& polynomial() const { return chain_.front(); }
    /// i-th remainder before the Sturm sign correction.
    const IntegerPolynomial& member(std::size_t i) const { return chain_[i]; }
    int sign_correction(std::size_t i) const { return signs_[i]; }

private:
    int sturm_sign(std::size_t i, int raw_sign) const { return signs_[i] * raw_sign; }

    std::vector<IntegerPolynomial> chain_;
    std::vector<int> signs_;
};

}  // namespace kostlan
