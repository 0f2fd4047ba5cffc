#pragma once

// Monte Carlo estimation of linear statistics <nu_d, phi> = sum_{roots} phi:
// central moments with batch-means standard errors, CLT and LLN diagnostics,
// hole and concentration probabilities.
//
// Sample i of a run at degree d is drawn from the stream keyed (seed, i, d),
// and every reduction runs over samples in index order, so results do not
// depend on the number of worker threads.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kostlan/rootcount.hpp"

namespace kostlan {

/// A function on RP^1, i.e. pi-periodic in theta.
class TestFunction {
public:
    enum class Kind { constant_one, fourier, indicator, tabulated };
    enum class Trig { cos, sin };

    static TestFunction one();
    /// cos(2 n theta) or sin(2 n theta), n >= 1.
    static TestFunction fourier(int n, Trig trig);
    /// Indicator of [a, b), 0 <= a < b <= pi.
    static TestFunction indicator(double a, double b);
    /// Linear interpolation of (angle, value) nodes; angles strictly
    /// increasing in [0, pi), wrapping around from the last node to the first.
    static TestFunction tabulated(std::vector<double> angles, std::vector<double> values);

    /// "one", "cos:n", "sin:n", "ind:a:b", "tab:t0=v0,t1=v1,...".
    static TestFunction parse(const std::string& spec);
    /// Inverse of parse (17 significant digits).
    std::string describe() const;

    Kind kind() const { return kind_; }
    double operator()(double theta) const;
    /// int_0^pi phi.
    double integral() const;
    /// int_0^pi phi^2.
    double integral_sq() const;

private:
    Kind kind_ = Kind::constant_one;
    int n_ = 0;
    Trig trig_ = Trig::cos;
    double a_ = 0.0;
    double b_ = 0.0;
    std::vector<double> nodes_;
    std::vector<double> values_;
};

/// sum of phi over the roots; rs.count for constant_one.
double linear_statistic(const RootSet& rs, const TestFunction& phi);

/// Root-finding failures exceeded the allowed fraction of a run.
class MonteCarloFailure : public std::runtime_error {
public:
    MonteCarloFailure(std::int64_t failures, std::int64_t attempted);
    std::int64_t failures() const { return failures_; }
    std::int64_t attempted() const { return attempted_; }

private:
    std::int64_t failures_;
    std::int64_t attempted_;
};

inline constexpr double kMaxFailureFraction = 1e-3;
inline constexpr int kMomentBatches = 100;
inline constexpr double kRootTolerance = 1e-10;

struct SamplingOptions {
    int workers = 1;
    /// Absolute accuracy of the root angles.
    double tol = kRootTolerance;
    LocateOptions locate{};
};

/// Per-sample linear statistics of one run: values[i][j] = <nu_d, phi_j> for
/// the i-th successful sample (index order).
struct StatisticTable {
    int degree = 0;
    std::uint64_t seed = 0;
    std::int64_t attempted = 0;
    std::int64_t failures = 0;
    std::vector<std::vector<double>> values;
};

/// Draws samples 0..n-1 of the (seed, i, d) streams, finds their roots (counts
/// only when every phi is constant) and evaluates every phi.
StatisticTable collect_statistics(int d, const std::vector<TestFunction>& phis,
                                  std::int64_t n_samples, std::uint64_t seed,
                                  const SamplingOptions& opts = {});

/// (1/n) sum (x - mean)^p with a compensated two-pass sum.
double central_moment(std::span<const double> x, int p);
/// (1/n) sum prod_j (x_j - mean_j) over the listed columns.
double mixed_central_moment(const std::vector<std::vector<double>>& rows,
                            const std::vector<int>& columns);

/// Batch-means standard error of a statistic: the rows are cut into
/// kMomentBatches contiguous batches, stat is evaluated on each and the
/// spread of the batch values gives the error of the full-sample value.
double batch_standard_error(
    std::size_t n, const std::function<double(std::size_t begin, std::size_t end)>& stat,
    int batches = kMomentBatches);

struct EstimateWithError {
    double value = 0.0;
    double standard_error = 0.0;
};

struct PhiMoments {
    std::string phi;
    EstimateWithError mean;
    /// central[p] for p = 2..p_max (entries 0 and 1 unused).
    std::vector<EstimateWithError> central;
};

struct MixedMoment {
    std::vector<int> columns;
    EstimateWithError moment;
};

struct MomentReport {
    int degree = 0;
    std::uint64_t seed = 0;
    int p_max = 0;
    std::int64_t n_samples = 0;
    std::int64_t failures = 0;
    std::vector<PhiMoments> per_phi;
    std::vector<MixedMoment> mixed;
    StatisticTable table;
};

/// Central moments m_2..m_pmax of every phi and of each requested mixed tuple
/// (column indices into phis). Centering uses the empirical mean, so the
/// estimators carry an O(1/n) bias.
MomentReport estimate_moments(int d, const std::vector<TestFunction>& phis, int p_max,
                              std::int64_t n_samples, std::uint64_t seed,
                              const std::vector<std::vector<int>>& mixed = {},
                              const SamplingOptions& opts = {});

/// Kolmogorov-Smirnov distance between the empirical law of x and N(0, 1).
double ks_distance_normal(std::vector<double> x);

enum class SigmaSource {
    /// d^{1/4} sigma_estimate(d) ||phi||_2 from the Kac-Rice prediction.
    kac_rice,
    /// the run's own sqrt(m_2).
    empirical,
};

struct CltSummary {
    int degree = 0;
    std::string phi;
    double center = 0.0;  // (sqrt(d) / pi) int phi
    double scale = 0.0;   // the normalizer applied
    std::vector<double> normalized;
    EstimateWithError mean;
    EstimateWithError variance;
    EstimateWithError skewness;
    EstimateWithError kurtosis;
    double ks = 0.0;
};

/// X = (<nu_d, phi> - (sqrt(d) / pi) int phi) / scale for every sample, its
/// first four moments and its KS distance to N(0, 1).
CltSummary clt_diagnostics(int d, const TestFunction& phi, std::int64_t n_samples,
                           std::uint64_t seed, SigmaSource source,
                           const SamplingOptions& opts = {});
/// Same, from an existing column of statistics.
CltSummary clt_from_values(int d, const TestFunction& phi, std::vector<double> values,
                           SigmaSource source);

struct LlnPoint {
    int degree = 0;
    double value = 0.0;  // d^{-1/2} <nu_d, phi>
    double limit = 0.0;  // (1/pi) int phi
};

/// One independent sample per degree: d_list[j] uses stream (seed, j, d).
std::vector<LlnPoint> lln_trajectory(const std::vector<int>& d_list, const TestFunction& phi,
                                     std::uint64_t seed, const SamplingOptions& opts = {});

/// Number of consecutive steps along which |value - limit| decreases.
int lln_decreasing_steps(const std::vector<LlnPoint>& trajectory);

struct ProbabilityPoint {
    int degree = 0;
    double probability = 0.0;
    double standard_error = 0.0;  // binomial sqrt(p (1 - p) / n)
    std::int64_t n = 0;
};

/// Empirical P(Z_d misses [a, b)) for each degree; b - a >= 0.1.
std::vector<ProbabilityPoint> hole_probability(const std::vector<int>& d_list, double a,
                                               double b, std::int64_t n_samples,
                                               std::uint64_t seed,
                                               const SamplingOptions& opts = {});

/// Empirical P(|d^{-1/2} (<nu_d, phi> - E<nu_d, phi>)| > eps), with the exact
/// mean E<nu_d, phi> = (sqrt(d) / pi) int phi.
std::vector<ProbabilityPoint> concentration_curve(const std::vector<int>& d_list,
                                                  const TestFunction& phi, double eps,
                                                  std::int64_t n_samples, std::uint64_t seed,
                                                  const SamplingOptions& opts = {});

}  // namespace kostlan
