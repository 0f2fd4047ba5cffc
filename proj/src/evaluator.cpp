#include "kostlan/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace kostlan {

namespace {

constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;
constexpr double kTruncation = 1e-18;
constexpr std::size_t kBlock = 32;

double norm2(std::span<const double> c) {
    double scale = 0.0;
    for (double x : c) {
        scale = std::max(scale, std::abs(x));
    }
    if (scale == 0.0) {
        return 0.0;
    }
    double acc = 0.0;
    for (double x : c) {
        const double y = x / scale;
        acc += y * y;
    }
    return scale * std::sqrt(acc);
}

// Per-point data for the dehomogenized Horner path.
struct Chart {
    double x;       // cot or tan, |x| <= 1
    double factor;  // (+-) e^(L + d ln |sin or cos|)
    bool reversed;  // true: tan chart, coefficients run from k = 0 upwards
};

Chart make_chart(double theta, int d, double log_scale) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    Chart ch{};
    double base = 0.0;
    if (std::abs(c) <= std::abs(s)) {
        ch.x = c / s;
        base = s;
        ch.reversed = false;
    } else {
        ch.x = s / c;
        base = c;
        ch.reversed = true;
    }
    ch.factor = std::exp(log_scale + d * std::log(std::abs(base)));
    if (base < 0.0 && (d & 1)) {
        ch.factor = -ch.factor;
    }
    return ch;
}

}  // namespace

SampleEvaluator::SampleEvaluator(const KostlanSample& s)
    : d_(s.degree()),
      horner_(s.degree() <= kHornerMaxDegree),
      lsb_(s.log_sqrt_binom().begin(), s.log_sqrt_binom().end()) {
    coeffs_[0].assign(s.coeffs().begin(), s.coeffs().end());
    for (int j = 1; j <= kMaxOrder; ++j) {
        coeffs_[j] = derivative_coefficients(coeffs_[j - 1]);
    }
    log_scale_ = *std::max_element(lsb_.begin(), lsb_.end());
    if (horner_) {
        for (int j = 0; j <= kMaxOrder; ++j) {
            scaled_[j].resize(coeffs_[j].size());
            for (int k = 0; k <= d_; ++k) {
                scaled_[j][k] = coeffs_[j][k] * std::exp(lsb_[k] - log_scale_);
            }
        }
    } else {
        ratio_.resize(static_cast<std::size_t>(d_));
        for (int k = 0; k < d_; ++k) {
            ratio_[k] = std::sqrt(static_cast<double>(d_ - k) / (k + 1.0));
        }
    }
    const double rel = 16.0 * (d_ + 16.0) * kUnitRoundoff +
                       (horner_ ? 0.0 : 4.0 * kTruncation * std::sqrt(d_ + 1.0));
    for (int j = 0; j <= kMaxOrder; ++j) {
        norms_[j] = norm2(coeffs_[j]);
        rounding_[j] = rel * norms_[j];
    }
}

double SampleEvaluator::eval(int order, double theta) const {
    if (order < 0 || order > kMaxOrder) {
        throw std::invalid_argument("SampleEvaluator::eval: order out of range");
    }
    return horner_ ? eval_horner(order, theta) : eval_recurrence(order, theta);
}

double SampleEvaluator::eval_horner(int order, double theta) const {
    const Chart ch = make_chart(theta, d_, log_scale_);
    const double* b = scaled_[order].data();
    double acc = 0.0;
    if (!ch.reversed) {
        acc = b[d_];
        for (int k = d_ - 1; k >= 0; --k) {
            acc = std::fma(acc, ch.x, b[k]);
        }
    } else {
        acc = b[0];
        for (int k = 1; k <= d_; ++k) {
            acc = std::fma(acc, ch.x, b[k]);
        }
    }
    return ch.factor * acc;
}

double SampleEvaluator::eval_recurrence(int order, double theta) const {
    const double* c = coeffs_[order].data();
    const double cs = std::cos(theta);
    const double sn = std::sin(theta);
    if (sn == 0.0) {
        return c[d_] * ((cs < 0.0 && (d_ & 1)) ? -1.0 : 1.0);
    }
    if (cs == 0.0) {
        return c[0] * ((sn < 0.0 && (d_ & 1)) ? -1.0 : 1.0);
    }
    const int mode = std::clamp(static_cast<int>(std::lround(d_ * cs * cs)), 0, d_);
    double log_mag = lsb_[mode] + mode * std::log(std::abs(cs)) +
                     (d_ - mode) * std::log(std::abs(sn));
    double m0 = std::exp(log_mag);
    if ((cs < 0.0 && (mode & 1)) != (sn < 0.0 && ((d_ - mode) & 1))) {
        m0 = -m0;
    }
    const double up = cs / sn;
    const double down = sn / cs;
    double acc = c[mode] * m0;
    double m = m0;
    for (int k = mode; k < d_; ++k) {
        m *= ratio_[k] * up;
        acc += c[k + 1] * m;
        if (std::abs(m) < kTruncation) {
            break;
        }
    }
    m = m0;
    for (int k = mode; k > 0; --k) {
        m *= down / ratio_[k - 1];
        acc += c[k - 1] * m;
        if (std::abs(m) < kTruncation) {
            break;
        }
    }
    return acc;
}

void SampleEvaluator::eval_grid(int order, std::span<const double> thetas,
                                std::span<double> out) const {
    if (order < 0 || order > kMaxOrder) {
        throw std::invalid_argument("SampleEvaluator::eval_grid: order out of range");
    }
    if (out.size() < thetas.size()) {
        throw std::invalid_argument("SampleEvaluator::eval_grid: output too small");
    }
    if (!horner_) {
        for (std::size_t i = 0; i < thetas.size(); ++i) {
            out[i] = eval_recurrence(order, thetas[i]);
        }
        return;
    }
    // Gather points per chart, then run Horner over blocks of points with the
    // coefficient loop outermost so the inner loop vectorizes.
    std::vector<std::size_t> idx[2];
    std::vector<double> xs[2];
    std::vector<double> factors(thetas.size());
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        const Chart ch = make_chart(thetas[i], d_, log_scale_);
        idx[ch.reversed].push_back(i);
        xs[ch.reversed].push_back(ch.x);
        factors[i] = ch.factor;
    }
    const double* b = scaled_[order].data();
    for (int chart = 0; chart < 2; ++chart) {
        const std::size_t n = idx[chart].size();
        for (std::size_t start = 0; start < n; start += kBlock) {
            const std::size_t len = std::min(kBlock, n - start);
            double x[kBlock];
            double acc[kBlock];
            for (std::size_t j = 0; j < kBlock; ++j) {
                x[j] = j < len ? xs[chart][start + j] : 0.0;
            }
            if (chart == 0) {
                for (std::size_t j = 0; j < kBlock; ++j) {
                    acc[j] = b[d_];
                }
                for (int k = d_ - 1; k >= 0; --k) {
                    const double bk = b[k];
                    for (std::size_t j = 0; j < kBlock; ++j) {
                        acc[j] = std::fma(acc[j], x[j], bk);
                    }
                }
            } else {
                for (std::size_t j = 0; j < kBlock; ++j) {
                    acc[j] = b[0];
                }
                for (int k = 1; k <= d_; ++k) {
                    const double bk = b[k];
                    for (std::size_t j = 0; j < kBlock; ++j) {
                        acc[j] = std::fma(acc[j], x[j], bk);
                    }
                }
            }
            for (std::size_t j = 0; j < len; ++j) {
                const std::size_t i = idx[chart][start + j];
                out[i] = factors[i] * acc[j];
            }
        }
    }
}

}  // namespace kostlan
