#include "kostlan/kacrice.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace kostlan {

namespace {

constexpr double kQuadratureTol = 1e-8;

// expm1(y) - d expm1(y / d) = sum_{n >= 2} y^n (1 - d^(1-n)) / n!, without
// cancellation for small y.
double excess_series(double y, int d) {
    double term = y;
    double inv_pow = 1.0;  // d^(1-n) at n = 1
    double sum = 0.0;
    for (int n = 2; n < 60; ++n) {
        term *= y / n;
        inv_pow /= d;
        const double add = term * (1.0 - inv_pow);
        sum += add;
        if (add <= 1e-19 * sum) {
            break;
        }
    }
    return sum;
}

struct PairLaw {
    double var = 0.0;    // conditional variance of each derivative
    double cov = 0.0;    // conditional covariance of the two derivatives
    double one_minus_r2 = 0.0;
};

// Conditional law at separation u in (0, pi/2]. With m = tan^2 u,
// Q = log1p(m) = -ln cos^2 u and y = d Q (so cos^{2d} u = e^{-y}):
//     var = d (expm1(y) - d m) / expm1(y)
//     cov = d e^{-y/2} (1 - (d - 1) m - d m / expm1(y))
//     1 - r^2 = -expm1(-y)
PairLaw pair_law(int d, double u) {
    const double tn = std::tan(u);
    const double m = tn * tn;
    const double y = d * std::log1p(m);
    const double em = std::expm1(y);
    PairLaw law;
    law.one_minus_r2 = -std::expm1(-y);
    const double rd = std::exp(-0.5 * y);
    if (y < 0.5) {
        const double excess = excess_series(y, d);
        law.var = d * excess / em;
        law.cov = d * rd * (excess - (d - 1.0) * m * em) / em;
    } else {
        const double ratio = std::isinf(em) ? 0.0 : d * m / em;
        law.var = d * (1.0 - ratio);
        law.cov = d * rd * (1.0 - (d - 1.0) * m - ratio);
    }
    return law;
}

void check_distinct(const std::vector<double>& thetas) {
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        if (!std::isfinite(thetas[i])) {
            throw std::invalid_argument("Kac-Rice: non-finite angle");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (geodesic_distance(thetas[i], thetas[j]) == 0.0) {
                throw SingularConfiguration("Kac-Rice: coincident projective points");
            }
        }
    }
}

}  // namespace

QuadratureError::QuadratureError(double estimate, double error_bound)
    : std::runtime_error("quadrature did not converge: estimate " + std::to_string(estimate) +
                         ", error bound " + std::to_string(error_bound)),
      estimate_(estimate),
      error_bound_(error_bound) {}

CorrelationKernel::CorrelationKernel(int degree) : d_(degree) {
    if (degree < 1) {
        throw std::invalid_argument("CorrelationKernel: degree must be at least 1");
    }
}

double CorrelationKernel::r(double delta) const { return std::pow(std::cos(delta), d_); }

double CorrelationKernel::r1(double delta) const {
    return -d_ * std::pow(std::cos(delta), d_ - 1) * std::sin(delta);
}

double CorrelationKernel::r2(double delta) const {
    const double c = std::cos(delta);
    const double s = std::sin(delta);
    const double curv = d_ == 1 ? 0.0 : d_ * (d_ - 1.0) * std::pow(c, d_ - 2) * s * s;
    return curv - d_ * std::pow(c, d_);
}

GaussianConditioner::GaussianConditioner(const CorrelationKernel& kernel,
                                         std::vector<double> thetas)
    : thetas_(std::move(thetas)) {
    if (thetas_.empty()) {
        throw std::invalid_argument("GaussianConditioner: no points");
    }
    check_distinct(thetas_);
    const int k = size();
    joint_.resize(2 * k, 2 * k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            const double delta = thetas_[i] - thetas_[j];
            joint_(i, j) = kernel.r(delta);
            joint_(i, k + j) = -kernel.r1(delta);
            joint_(k + i, j) = kernel.r1(delta);
            joint_(k + i, k + j) = -kernel.r2(delta);
        }
    }
    const Eigen::MatrixXd vals = value_block();
    const Eigen::LLT<Eigen::MatrixXd> llt(vals);
    if (llt.info() != Eigen::Success) {
        throw SingularConfiguration("GaussianConditioner: value covariance is singular");
    }
    const Eigen::VectorXd diag = llt.matrixL().toDenseMatrix().diagonal();
    det_vals_ = diag.array().square().prod();
    if (!(det_vals_ > 0.0)) {
        throw SingularConfiguration("GaussianConditioner: value covariance is singular");
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(vals, Eigen::EigenvaluesOnly);
    cond_ = eig.eigenvalues().maxCoeff() / eig.eigenvalues().minCoeff();
    const Eigen::MatrixXd x = cross_block().transpose();  // Cov(derivs, vals)
    schur_ = derivative_block() - x * llt.solve(x.transpose());
    schur_ = 0.5 * (schur_ + schur_.transpose());
}

Eigen::MatrixXd GaussianConditioner::value_block() const {
    const int k = size();
    return joint_.topLeftCorner(k, k);
}

Eigen::MatrixXd GaussianConditioner::cross_block() const {
    const int k = size();
    return joint_.topRightCorner(k, k);
}

Eigen::MatrixXd GaussianConditioner::derivative_block() const {
    const int k = size();
    return joint_.bottomRightCorner(k, k);
}

double GaussianConditioner::jacobian_factor() const { return std::sqrt(det_vals_); }

double expected_abs_product(double s1, double s2, double rho) {
    rho = std::clamp(rho, -1.0, 1.0);
    return 2.0 / kPi * s1 * s2 * (std::sqrt((1.0 - rho) * (1.0 + rho)) + rho * std::asin(rho));
}

double density_1(int d) {
    if (d < 1) {
        throw std::invalid_argument("density_1: degree must be at least 1");
    }
    return std::sqrt(static_cast<double>(d)) / kPi;
}

double density_2(int d, double delta) {
    if (d < 1) {
        throw std::invalid_argument("density_2: degree must be at least 1");
    }
    if (!(delta >= 0.0 && delta <= kPi)) {
        throw std::invalid_argument("density_2: separation must lie in (0, pi)");
    }
    if (delta == 0.0 || delta == kPi) {
        throw SingularConfiguration("density_2: points coincide on RP^1");
    }
    // R^2 depends on the projective distance only.
    const double u = std::min(delta, kPi - delta);
    const PairLaw law = pair_law(d, u);
    if (!(law.var > 0.0)) {
        return 0.0;
    }
    const double rho = law.cov / law.var;
    const double e_abs = expected_abs_product(std::sqrt(law.var), std::sqrt(law.var), rho);
    return e_abs / (2.0 * kPi * std::sqrt(law.one_minus_r2));
}

double density_2_conditioned(int d, double theta1, double theta2) {
    const GaussianConditioner cond(CorrelationKernel(d), {theta1, theta2});
    const Eigen::MatrixXd& s = cond.schur();
    const double s1 = std::sqrt(std::max(s(0, 0), 0.0));
    const double s2 = std::sqrt(std::max(s(1, 1), 0.0));
    if (s1 == 0.0 || s2 == 0.0) {
        return 0.0;
    }
    const double rho = s(0, 1) / (s1 * s2);
    return expected_abs_product(s1, s2, rho) / (2.0 * kPi * cond.jacobian_factor());
}

DensityEstimate density_k_mc(int d, const std::vector<double>& thetas, std::int64_t n_mc,
                             Stream& rng) {
    if (n_mc < kBatchCount) {
        throw std::invalid_argument("density_k_mc: need at least 100 draws");
    }
    const GaussianConditioner cond(CorrelationKernel(d), thetas);
    const int k = cond.size();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cond.schur());
    Eigen::MatrixXd root = eig.eigenvectors();
    for (int j = 0; j < k; ++j) {
        root.col(j) *= std::sqrt(std::max(eig.eigenvalues()(j), 0.0));
    }
    std::normal_distribution<double> normal;
    Eigen::VectorXd g(k);
    std::vector<double> batch_means(kBatchCount);
    double total = 0.0;
    std::int64_t done = 0;
    for (int b = 0; b < kBatchCount; ++b) {
        const std::int64_t len = n_mc / kBatchCount + (b < n_mc % kBatchCount ? 1 : 0);
        double acc = 0.0;
        for (std::int64_t i = 0; i < len; ++i) {
            for (int j = 0; j < k; ++j) {
                g(j) = normal(rng);
            }
            const Eigen::VectorXd z = root * g;
            acc += z.cwiseAbs().prod();
        }
        batch_means[b] = acc / static_cast<double>(len);
        total += acc;
        done += len;
    }
    const double mean = total / static_cast<double>(done);
    double ss = 0.0;
    for (double m : batch_means) {
        ss += (m - mean) * (m - mean);
    }
    const double se = std::sqrt(ss / (kBatchCount - 1.0) / kBatchCount);
    const double norm = std::pow(2.0 * kPi, 0.5 * k) * cond.jacobian_factor();
    DensityEstimate out;
    out.estimate = mean / norm;
    out.standard_error = se / norm;
    out.condition_number = cond.condition_number();
    out.ill_conditioned = out.condition_number > kConditionWarning;
    return out;
}

DensityEstimate d_density(const Partition& partition, const std::vector<double>& thetas, int d,
                          std::int64_t n_mc, Stream& rng) {
    const int p = static_cast<int>(partition.ground().size());
    if (p < 1 || p > 4 || partition.ground() != range_set(p)) {
        throw std::invalid_argument("d_density: partition of {1..p} with p <= 4 required");
    }
    if (thetas.size() != static_cast<std::size_t>(partition.size())) {
        throw std::invalid_argument("d_density: one angle per block required");
    }
    check_distinct(thetas);
    const double r1 = density_1(d);
    DensityEstimate out;
    double var = 0.0;
    for (const auto& a : adapted_subsets(partition)) {
        const int outside = p - static_cast<int>(a.size());
        double coef = (outside % 2 == 0 ? 1.0 : -1.0) * std::pow(r1, outside);
        std::vector<double> pts;
        if (!a.empty()) {
            const Partition induced = induced_partition(partition, a);
            for (const auto& block : induced.blocks()) {
                pts.push_back(thetas[partition.block_of(block.front())]);
            }
        }
        if (pts.size() <= 1) {
            out.estimate += coef * (pts.empty() ? 1.0 : r1);
            continue;
        }
        const DensityEstimate term = density_k_mc(d, pts, n_mc, rng);
        out.estimate += coef * term.estimate;
        var += coef * coef * term.standard_error * term.standard_error;
        out.condition_number = std::max(out.condition_number, term.condition_number);
        out.ill_conditioned = out.ill_conditioned || term.ill_conditioned;
    }
    out.standard_error = std::sqrt(var);
    return out;
}

double variance_prediction(int d) {
    if (d < 1) {
        throw std::invalid_argument("variance_prediction: degree must be at least 1");
    }
    const double level = d / (kPi * kPi);
    auto integrand = [&](double u) { return density_2(d, u) - level; };
    // The integrand varies on the scale 1/sqrt(d) near 0 and is negligible
    // (below cos^d) further out; split so each panel sees one scale.
    const double half = 0.5 * kPi;
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    std::vector<double> cuts{0.0};
    for (double c : {3.0 * scale, 10.0 * scale, 40.0 * scale}) {
        if (c < half) {
            cuts.push_back(c);
        }
    }
    cuts.push_back(half);
    double integral = 0.0;
    double error = 0.0;
    double l1 = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double err = 0.0;
        double abs_int = 0.0;
        integral += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            integrand, cuts[i], cuts[i + 1], 20, 1e-12, &err, &abs_int);
        error += err;
        l1 += abs_int;
    }
    const double var = 2.0 * kPi * integral + std::sqrt(static_cast<double>(d));
    const double bound = 2.0 * kPi * error;
    if (!(bound <= kQuadratureTol * std::max(2.0 * kPi * l1, 1.0))) {
        throw QuadratureError(var, bound);
    }
    return var;
}

double sigma_estimate(int d) {
    const double var = variance_prediction(d);
    return std::sqrt(std::max(var, 0.0) / (std::sqrt(static_cast<double>(d)) * kPi));
}

double clustering_threshold(int d, double coefficient) {
    if (d < 2 || !(coefficient > 0.0)) {
        throw std::invalid_argument("clustering_threshold: d >= 2 and coefficient > 0 required");
    }
    return coefficient * std::log(static_cast<double>(d)) / std::sqrt(static_cast<double>(d));
}

}  // namespace kostlan
