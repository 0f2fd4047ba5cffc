#include "kostlan/core.hpp"

#include <cmath>
#include <limits>

#include "kostlan/summation.hpp"

namespace kostlan {

double normalize_angle(double theta) {
    if (!std::isfinite(theta)) {
        throw std::invalid_argument("normalize_angle: non-finite angle");
    }
    double r = std::fmod(theta, kPi);
    if (r < 0.0) {
        r += kPi;
    }
    if (r >= kPi) {
        r = 0.0;
    }
    return r;
}

double geodesic_distance(double theta1, double theta2) {
    const double diff = std::abs(normalize_angle(theta1) - normalize_angle(theta2));
    return std::min(diff, kPi - diff);
}

std::vector<double> log_sqrt_binomials(int degree) {
    if (degree < 0) {
        throw std::invalid_argument("log_sqrt_binomials: negative degree");
    }
    const double lg_d = std::lgamma(degree + 1.0);
    std::vector<double> out(static_cast<std::size_t>(degree) + 1);
    for (int k = 0; k <= degree; ++k) {
        out[k] = 0.5 * (lg_d - std::lgamma(k + 1.0) - std::lgamma(degree - k + 1.0));
    }
    // Symmetry C(d,k) = C(d,d-k) and exact endpoints.
    out.front() = 0.0;
    out.back() = 0.0;
    return out;
}

KostlanSample KostlanSample::from_coefficients(std::vector<double> coeffs) {
    if (coeffs.size() < 2) {
        throw std::invalid_argument("kostlan sample: degree must be at least 1");
    }
    for (double a : coeffs) {
        if (!std::isfinite(a)) {
            throw std::invalid_argument("kostlan sample: non-finite coefficient");
        }
    }
    const int d = static_cast<int>(coeffs.size()) - 1;
    return KostlanSample(d, std::move(coeffs), log_sqrt_binomials(d));
}

namespace {

// SplitMix64 finalizer, used to spread the key words before seeding.
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

Stream make_stream(std::uint64_t seed, std::uint64_t index, std::uint64_t channel) {
    const std::uint64_t k0 = mix64(seed);
    const std::uint64_t k1 = mix64(index ^ 0x6a09e667f3bcc909ULL);
    const std::uint64_t k2 = mix64(channel ^ 0xbb67ae8584caa73bULL);
    std::seed_seq seq{static_cast<std::uint32_t>(k0), static_cast<std::uint32_t>(k0 >> 32),
                      static_cast<std::uint32_t>(k1), static_cast<std::uint32_t>(k1 >> 32),
                      static_cast<std::uint32_t>(k2), static_cast<std::uint32_t>(k2 >> 32)};
    return Stream(seq);
}

KostlanSample sample(int degree, std::uint64_t seed, std::uint64_t index, std::uint64_t channel) {
    Stream stream = make_stream(seed, index, channel);
    return sample(degree, stream);
}

std::vector<double> derivative_coefficients(std::span<const double> a) {
    const int d = static_cast<int>(a.size()) - 1;
    std::vector<double> alpha(a.size() + 1, 0.0);
    for (int j = 1; j <= d; ++j) {
        alpha[j] = std::sqrt(static_cast<double>(j) * static_cast<double>(d - j + 1));
    }
    std::vector<double> out(a.size(), 0.0);
    for (int j = 0; j <= d; ++j) {
        const double lower = j > 0 ? a[j - 1] * alpha[j] : 0.0;
        const double upper = j < d ? a[j + 1] * alpha[j + 1] : 0.0;
        out[j] = lower - upper;
    }
    return out;
}

double eval_basis(std::span<const double> c, std::span<const double> log_sqrt_binom,
                  double theta) {
    const int d = static_cast<int>(c.size()) - 1;
    const double cs = std::cos(theta);
    const double sn = std::sin(theta);
    const double log_c = cs != 0.0 ? std::log(std::abs(cs)) : 0.0;
    const double log_s = sn != 0.0 ? std::log(std::abs(sn)) : 0.0;

    CompensatedSum acc;
    for (int k = 0; k <= d; ++k) {
        if (c[k] == 0.0) {
            continue;
        }
        const int pc = k;
        const int ps = d - k;
        // An exactly vanishing base kills every monomial in which it appears.
        if ((cs == 0.0 && pc > 0) || (sn == 0.0 && ps > 0)) {
            continue;
        }
        double log_mag = log_sqrt_binom[k] + std::log(std::abs(c[k]));
        if (pc > 0) {
            log_mag += pc * log_c;
        }
        if (ps > 0) {
            log_mag += ps * log_s;
        }
        bool negative = c[k] < 0.0;
        if (cs < 0.0 && (pc & 1)) {
            negative = !negative;
        }
        if (sn < 0.0 && (ps & 1)) {
            negative = !negative;
        }
        const double term = std::exp(log_mag);
        acc.add(negative ? -term : term);
    }
    return acc.value();
}

double eval_angle(const KostlanSample& s, double theta) {
    if (!std::isfinite(theta)) {
        throw std::invalid_argument("eval_angle: non-finite angle");
    }
    return eval_basis(s.coeffs(), s.log_sqrt_binom(), theta);
}

double eval_deriv_angle(const KostlanSample& s, double theta) {
    if (!std::isfinite(theta)) {
        throw std::invalid_argument("eval_deriv_angle: non-finite angle");
    }
    const auto da = derivative_coefficients(s.coeffs());
    return eval_basis(da, s.log_sqrt_binom(), theta);
}

}  // namespace kostlan
