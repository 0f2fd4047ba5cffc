#pragma once

// Kac-Rice densities of the zero set of the Kostlan process on RP^1.
//
// The process has covariance r(delta) = cos^d(delta). For pairwise distinct
// projective points x_1..x_k the k-point density is
//
//     R^k_d(x) = E[ prod_i |f'(x_i)| | f(x_1) = .. = f(x_k) = 0 ]
//                / ((2 pi)^(k/2) det(Sigma_vals)^(1/2)),
//
// where the conditional law of the derivatives is the centered Gaussian with
// the Schur complement of the value block as covariance.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "kostlan/core.hpp"
#include "kostlan/partitions.hpp"

namespace kostlan {

/// The configuration sits on the diagonal (coincident projective points).
class SingularConfiguration : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Adaptive quadrature did not reach the requested relative tolerance.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(double estimate, double error_bound);
    double estimate() const { return estimate_; }
    double error_bound() const { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

class CorrelationKernel {
public:
    explicit CorrelationKernel(int degree);

    int degree() const { return d_; }
    double r(double delta) const;
    double r1(double delta) const;
    double r2(double delta) const;
    /// -r''(0) = d.
    double lambda2() const { return d_; }

private:
    int d_;
};

/// Joint law of (f(x_1..x_k), f'(x_1..x_k)) and its conditioning on the values.
class GaussianConditioner {
public:
    GaussianConditioner(const CorrelationKernel& kernel, std::vector<double> thetas);

    int size() const { return static_cast<int>(thetas_.size()); }
    const Eigen::MatrixXd& joint() const { return joint_; }
    Eigen::MatrixXd value_block() const;
    Eigen::MatrixXd cross_block() const;
    Eigen::MatrixXd derivative_block() const;
    /// Covariance of the derivatives given all values = 0.
    const Eigen::MatrixXd& schur() const { return schur_; }
    double value_determinant() const { return det_vals_; }
    /// det(value block)^(1/2), the Jacobian normalizer.
    double jacobian_factor() const;
    /// Spectral condition number of the value block.
    double condition_number() const { return cond_; }

private:
    std::vector<double> thetas_;
    Eigen::MatrixXd joint_;
    Eigen::MatrixXd schur_;
    double det_vals_ = 0.0;
    double cond_ = 0.0;
};

/// E|Z1 Z2| for a centered Gaussian pair with standard deviations s1, s2 and
/// correlation rho: (2/pi) s1 s2 (sqrt(1 - rho^2) + rho asin(rho)).
double expected_abs_product(double s1, double s2, double rho);

/// R^1_d = sqrt(d) / pi.
double density_1(int d);

/// R^2_d at separation delta in (0, pi), in closed form.
double density_2(int d, double delta);

/// R^2_d at two arbitrary angles through the generic conditioner and the
/// closed-form E|Z1 Z2|; used as an independent route to density_2.
double density_2_conditioned(int d, double theta1, double theta2);

struct DensityEstimate {
    double estimate = 0.0;
    double standard_error = 0.0;
    double condition_number = 0.0;
    /// condition_number > kConditionWarning.
    bool ill_conditioned = false;
};

inline constexpr double kConditionWarning = 1e12;
inline constexpr int kBatchCount = 100;

/// Monte Carlo R^k_d at the given points; n_mc >= kBatchCount draws of the
/// conditioned derivatives, batch-means standard error over kBatchCount batches.
DensityEstimate density_k_mc(int d, const std::vector<double>& thetas, std::int64_t n_mc,
                             Stream& rng);

/// D^I_d = sum over A adapted to I of (-1)^(|B| - |A|) R^{|I_A|}(x_{I_A})
/// prod_{i not in A} R^1, with one point per block of I (thetas[j] for the
/// j-th block in canonical order). p = |B| <= 4.
DensityEstimate d_density(const Partition& partition, const std::vector<double>& thetas, int d,
                          std::int64_t n_mc, Stream& rng);

/// Var(card Z_d) = 2 pi int_0^{pi/2} (R^2_d(u) - d / pi^2) du + sqrt(d),
/// to relative tolerance 1e-8.
double variance_prediction(int d);

/// sqrt(variance_prediction(d) / (sqrt(d) pi)).
double sigma_estimate(int d);

/// Default b in the clustering threshold b ln d / sqrt(d).
inline constexpr double kDefaultClusterCoefficient = 4.0;

double clustering_threshold(int d, double coefficient = kDefaultClusterCoefficient);

}  // namespace kostlan
