#pragma once

// Kostlan random polynomials on the real projective line.
//
// A degree-d sample is the binary form
//
//     P(X, Y) = sum_k a_k sqrt(C(d,k)) X^k Y^(d-k),    a_k ~ N(0,1) i.i.d.,
//
// restricted to the unit circle, f(theta) = P(cos theta, sin theta). The
// monomials m_k(theta) = sqrt(C(d,k)) cos^k sin^(d-k) satisfy
// sum_k m_k^2 = 1, so f has unit pointwise variance and covariance
// cos^d(theta1 - theta2).

#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace kostlan {

inline constexpr double kPi = std::numbers::pi;

/// Maps any finite angle onto the representative in [0, pi).
double normalize_angle(double theta);

/// A line through the origin of R^2, stored by its angle in [0, pi).
class ProjectivePoint {
public:
    explicit ProjectivePoint(double theta) : theta_(normalize_angle(theta)) {}
    double theta() const { return theta_; }

private:
    double theta_;
};

/// Geodesic distance on RP^1 (a circle of length pi); lies in [0, pi/2].
double geodesic_distance(double theta1, double theta2);
inline double geodesic_distance(ProjectivePoint a, ProjectivePoint b) {
    return geodesic_distance(a.theta(), b.theta());
}

/// (1/2) ln C(d, k) for k = 0..d.
std::vector<double> log_sqrt_binomials(int degree);

class KostlanSample {
public:
    /// Builds a sample from explicit coefficients a_0..a_d (degree = size - 1).
    static KostlanSample from_coefficients(std::vector<double> coeffs);

    int degree() const { return degree_; }
    std::span<const double> coeffs() const { return coeffs_; }
    std::span<const double> log_sqrt_binom() const { return log_sqrt_binom_; }

private:
    KostlanSample(int degree, std::vector<double> coeffs, std::vector<double> lsb)
        : degree_(degree), coeffs_(std::move(coeffs)), log_sqrt_binom_(std::move(lsb)) {}

    int degree_;
    std::vector<double> coeffs_;
    std::vector<double> log_sqrt_binom_;
};

/// Random stream keyed by (seed, index, channel). Streams with distinct keys
/// are statistically independent; the same key always yields the same stream,
/// whichever thread consumes it.
using Stream = std::mt19937_64;
Stream make_stream(std::uint64_t seed, std::uint64_t index, std::uint64_t channel = 0);

template <std::uniform_random_bit_generator Gen>
KostlanSample sample(int degree, Gen& gen) {
    if (degree < 1) {
        throw std::invalid_argument("kostlan sample: degree must be at least 1");
    }
    std::normal_distribution<double> normal;
    std::vector<double> coeffs(static_cast<std::size_t>(degree) + 1);
    for (auto& a : coeffs) {
        a = normal(gen);
    }
    return KostlanSample::from_coefficients(std::move(coeffs));
}

/// Draws sample number `index` of the keyed stream family.
KostlanSample sample(int degree, std::uint64_t seed, std::uint64_t index,
                     std::uint64_t channel = 0);

/// f(theta). Terms are accumulated as sign-tracked log magnitudes with a
/// compensated sum, so no intermediate overflows for d up to 10^6.
double eval_angle(const KostlanSample& s, double theta);

/// f'(theta), from the derivative coefficients in the same monomial basis.
double eval_deriv_angle(const KostlanSample& s, double theta);

/// Coefficients of d/dtheta in the normalized monomial basis:
/// (Da)_j = a_{j-1} alpha_j - a_{j+1} alpha_{j+1}, alpha_j = sqrt(j (d - j + 1)).
std::vector<double> derivative_coefficients(std::span<const double> a);

/// sum_k c_k m_k(theta) via log-magnitude accumulation (reference evaluator).
double eval_basis(std::span<const double> c, std::span<const double> log_sqrt_binom,
                  double theta);

}  // namespace kostlan
