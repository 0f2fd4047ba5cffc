#include "kostlan/moments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <thread>

#include "kostlan/kacrice.hpp"
#include "kostlan/summation.hpp"

namespace kostlan {

namespace {

std::string fmt17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Accepts plain numbers and the forms "pi", "pi/k", "k*pi", "k*pi/m".
double parse_angle(const std::string& text) {
    const auto pos = text.find("pi");
    if (pos == std::string::npos) {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument("bad number: " + text);
        }
        return v;
    }
    double factor = 1.0;
    if (pos > 0) {
        std::string head = text.substr(0, pos);
        if (head.back() != '*') {
            throw std::invalid_argument("bad angle: " + text);
        }
        head.pop_back();
        factor = parse_angle(head);
    }
    double divisor = 1.0;
    const std::string tail = text.substr(pos + 2);
    if (!tail.empty()) {
        if (tail.front() != '/') {
            throw std::invalid_argument("bad angle: " + text);
        }
        divisor = parse_angle(tail.substr(1));
    }
    return factor * kPi / divisor;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        out.push_back(cur);
    }
    return out;
}

// Runs evaluate(index, roots) for samples 0..n-1 on `workers` threads and
// returns the rows of the successful samples in index order.
template <class Evaluate>
StatisticTable collect(int d, std::int64_t n, std::uint64_t seed, bool need_angles,
                       const SamplingOptions& opts, Evaluate evaluate) {
    if (d < 1) {
        throw std::invalid_argument("Monte Carlo: degree must be at least 1");
    }
    if (n < 1) {
        throw std::invalid_argument("Monte Carlo: need at least one sample");
    }
    if (opts.workers < 1) {
        throw std::invalid_argument("Monte Carlo: workers must be positive");
    }
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(n));
    std::vector<char> failed(static_cast<std::size_t>(n), 0);
    std::atomic<std::int64_t> next{0};
    std::exception_ptr fatal;
    std::mutex fatal_mu;
    constexpr std::int64_t kChunk = 64;
    auto work = [&] {
        while (true) {
            const std::int64_t begin = next.fetch_add(kChunk);
            if (begin >= n) {
                return;
            }
            const std::int64_t end = std::min(n, begin + kChunk);
            for (std::int64_t i = begin; i < end; ++i) {
                try {
                    const KostlanSample s = sample(d, seed, static_cast<std::uint64_t>(i),
                                                   static_cast<std::uint64_t>(d));
                    const RootSet rs = need_angles ? locate_roots(s, opts.tol, opts.locate)
                                                   : count_roots(s, opts.locate);
                    rows[i] = evaluate(rs);
                } catch (const RootCountMismatch&) {
                    failed[i] = 1;
                } catch (const RootLocalizationError&) {
                    failed[i] = 1;
                } catch (...) {
                    std::lock_guard lock(fatal_mu);
                    if (!fatal) {
                        fatal = std::current_exception();
                    }
                    next.store(n);
                    return;
                }
            }
        }
    };
    if (opts.workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < opts.workers; ++w) {
            pool.emplace_back(work);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    if (fatal) {
        std::rethrow_exception(fatal);
    }
    StatisticTable table;
    table.degree = d;
    table.seed = seed;
    table.attempted = n;
    for (std::int64_t i = 0; i < n; ++i) {
        if (failed[i]) {
            ++table.failures;
        } else {
            table.values.push_back(std::move(rows[i]));
        }
    }
    if (static_cast<double>(table.failures) > kMaxFailureFraction * static_cast<double>(n)) {
        throw MonteCarloFailure(table.failures, n);
    }
    return table;
}

std::vector<double> column(const StatisticTable& t, std::size_t j) {
    std::vector<double> out;
    out.reserve(t.values.size());
    for (const auto& row : t.values) {
        out.push_back(row[j]);
    }
    return out;
}

double mean_of(std::span<const double> x) {
    return compensated_sum(x) / static_cast<double>(x.size());
}

EstimateWithError with_batches(std::span<const double> x,
                               const std::function<double(std::span<const double>)>& stat) {
    EstimateWithError out;
    out.value = stat(x);
    out.standard_error = batch_standard_error(
        x.size(), [&](std::size_t b, std::size_t e) { return stat(x.subspan(b, e - b)); });
    return out;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

TestFunction TestFunction::one() { return TestFunction(); }

TestFunction TestFunction::fourier(int n, Trig trig) {
    if (n < 1) {
        throw std::invalid_argument("fourier test function: n must be at least 1");
    }
    TestFunction f;
    f.kind_ = Kind::fourier;
    f.n_ = n;
    f.trig_ = trig;
    return f;
}

TestFunction TestFunction::indicator(double a, double b) {
    if (!(a >= 0.0 && a < b && b <= kPi)) {
        throw std::invalid_argument("indicator test function: need 0 <= a < b <= pi");
    }
    TestFunction f;
    f.kind_ = Kind::indicator;
    f.a_ = a;
    f.b_ = b;
    return f;
}

TestFunction TestFunction::tabulated(std::vector<double> angles, std::vector<double> values) {
    if (angles.empty() || angles.size() != values.size()) {
        throw std::invalid_argument("tabulated test function: matching nonempty node lists");
    }
    for (std::size_t i = 0; i < angles.size(); ++i) {
        if (!(angles[i] >= 0.0 && angles[i] < kPi) || !std::isfinite(values[i]) ||
            (i > 0 && !(angles[i] > angles[i - 1]))) {
            throw std::invalid_argument(
                "tabulated test function: angles strictly increasing in [0, pi)");
        }
    }
    TestFunction f;
    f.kind_ = Kind::tabulated;
    f.nodes_ = std::move(angles);
    f.values_ = std::move(values);
    return f;
}

TestFunction TestFunction::parse(const std::string& spec) {
    const auto parts = split(spec, ':');
    if (parts.empty()) {
        throw std::invalid_argument("empty test function");
    }
    const std::string& head = parts[0];
    if (head == "one" && parts.size() == 1) {
        return one();
    }
    if ((head == "cos" || head == "sin") && parts.size() == 2) {
        int n = 0;
        const auto* end = parts[1].data() + parts[1].size();
        const auto res = std::from_chars(parts[1].data(), end, n);
        if (res.ec != std::errc() || res.ptr != end) {
            throw std::invalid_argument("bad fourier index: " + spec);
        }
        return fourier(n, head == "cos" ? Trig::cos : Trig::sin);
    }
    if (head == "ind" && parts.size() == 3) {
        return indicator(parse_angle(parts[1]), parse_angle(parts[2]));
    }
    if (head == "tab" && parts.size() == 2) {
        std::vector<double> angles;
        std::vector<double> values;
        for (const auto& node : split(parts[1], ',')) {
            const auto eq = node.find('=');
            if (eq == std::string::npos) {
                throw std::invalid_argument("bad tabulated node: " + node);
            }
            angles.push_back(parse_angle(node.substr(0, eq)));
            values.push_back(parse_angle(node.substr(eq + 1)));
        }
        return tabulated(std::move(angles), std::move(values));
    }
    throw std::invalid_argument("unknown test function: " + spec);
}

std::string TestFunction::describe() const {
    switch (kind_) {
        case Kind::constant_one:
            return "one";
        case Kind::fourier:
            return std::string(trig_ == Trig::cos ? "cos:" : "sin:") + std::to_string(n_);
        case Kind::indicator:
            return "ind:" + fmt17(a_) + ":" + fmt17(b_);
        case Kind::tabulated: {
            std::string out = "tab:";
            for (std::size_t i = 0; i < nodes_.size(); ++i) {
                out += (i ? "," : "") + fmt17(nodes_[i]) + "=" + fmt17(values_[i]);
            }
            return out;
        }
    }
    return "";
}

double TestFunction::operator()(double theta) const {
    switch (kind_) {
        case Kind::constant_one:
            return 1.0;
        case Kind::fourier: {
            const double x = 2.0 * n_ * normalize_angle(theta);
            return trig_ == Trig::cos ? std::cos(x) : std::sin(x);
        }
        case Kind::indicator: {
            const double t = normalize_angle(theta);
            return (t >= a_ && t < b_) ? 1.0 : 0.0;
        }
        case Kind::tabulated: {
            const double t = normalize_angle(theta);
            const std::size_t n = nodes_.size();
            if (n == 1) {
                return values_[0];
            }
            const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
            double t0, t1, v0, v1;
            if (it == nodes_.begin() || it == nodes_.end()) {
                // Wrap-around segment from the last node to the first + pi.
                t0 = nodes_.back();
                t1 = nodes_.front() + kPi;
                v0 = values_.back();
                v1 = values_.front();
                const double tt = it == nodes_.begin() ? t + kPi : t;
                return v0 + (v1 - v0) * (tt - t0) / (t1 - t0);
            }
            const std::size_t j = static_cast<std::size_t>(it - nodes_.begin());
            t0 = nodes_[j - 1];
            t1 = nodes_[j];
            v0 = values_[j - 1];
            v1 = values_[j];
            return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
        }
    }
    return 0.0;
}

double TestFunction::integral() const {
    switch (kind_) {
        case Kind::constant_one:
            return kPi;
        case Kind::fourier:
            return 0.0;
        case Kind::indicator:
            return b_ - a_;
        case Kind::tabulated: {
            const std::size_t n = nodes_.size();
            CompensatedSum acc;
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t j = (i + 1) % n;
                const double h = j == 0 ? nodes_[0] + kPi - nodes_[i] : nodes_[j] - nodes_[i];
                acc.add(0.5 * h * (values_[i] + values_[j]));
            }
            return acc.value();
        }
    }
    return 0.0;
}

double TestFunction::integral_sq() const {
    switch (kind_) {
        case Kind::constant_one:
            return kPi;
        case Kind::fourier:
            return 0.5 * kPi;
        case Kind::indicator:
            return b_ - a_;
        case Kind::tabulated: {
            // Exact for piecewise linear functions (Simpson on each segment).
            const std::size_t n = nodes_.size();
            CompensatedSum acc;
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t j = (i + 1) % n;
                const double h = j == 0 ? nodes_[0] + kPi - nodes_[i] : nodes_[j] - nodes_[i];
                const double u = values_[i];
                const double v = values_[j];
                acc.add(h * (u * u + u * v + v * v) / 3.0);
            }
            return acc.value();
        }
    }
    return 0.0;
}

double linear_statistic(const RootSet& rs, const TestFunction& phi) {
    if (phi.kind() == TestFunction::Kind::constant_one) {
        return rs.count;
    }
    if (!rs.angles) {
        throw std::invalid_argument("linear_statistic: root set carries no angles");
    }
    CompensatedSum acc;
    for (double t : *rs.angles) {
        acc.add(phi(t));
    }
    return acc.value();
}

MonteCarloFailure::MonteCarloFailure(std::int64_t failures, std::int64_t attempted)
    : std::runtime_error("root finding failed on " + std::to_string(failures) + " of " +
                         std::to_string(attempted) + " samples"),
      failures_(failures),
      attempted_(attempted) {}

StatisticTable collect_statistics(int d, const std::vector<TestFunction>& phis,
                                  std::int64_t n_samples, std::uint64_t seed,
                                  const SamplingOptions& opts) {
    if (phis.empty()) {
        throw std::invalid_argument("collect_statistics: no test functions");
    }
    const bool need_angles = std::any_of(phis.begin(), phis.end(), [](const auto& f) {
        return f.kind() != TestFunction::Kind::constant_one;
    });
    return collect(d, n_samples, seed, need_angles, opts, [&](const RootSet& rs) {
        std::vector<double> row;
        row.reserve(phis.size());
        for (const auto& f : phis) {
            row.push_back(linear_statistic(rs, f));
        }
        return row;
    });
}

double central_moment(std::span<const double> x, int p) {
    if (x.empty() || p < 1) {
        throw std::invalid_argument("central_moment: empty data or p < 1");
    }
    const double mean = mean_of(x);
    CompensatedSum acc;
    for (double v : x) {
        acc.add(std::pow(v - mean, p));
    }
    return acc.value() / static_cast<double>(x.size());
}

double mixed_central_moment(const std::vector<std::vector<double>>& rows,
                            const std::vector<int>& columns) {
    if (rows.empty() || columns.empty()) {
        throw std::invalid_argument("mixed_central_moment: empty data");
    }
    std::vector<double> means;
    for (int c : columns) {
        CompensatedSum acc;
        for (const auto& row : rows) {
            acc.add(row.at(static_cast<std::size_t>(c)));
        }
        means.push_back(acc.value() / static_cast<double>(rows.size()));
    }
    CompensatedSum acc;
    for (const auto& row : rows) {
        double prod = 1.0;
        for (std::size_t j = 0; j < columns.size(); ++j) {
            prod *= row[static_cast<std::size_t>(columns[j])] - means[j];
        }
        acc.add(prod);
    }
    return acc.value() / static_cast<double>(rows.size());
}

double batch_standard_error(std::size_t n,
                            const std::function<double(std::size_t, std::size_t)>& stat,
                            int batches) {
    if (batches < 2 || n < static_cast<std::size_t>(batches)) {
        throw std::invalid_argument("batch_standard_error: need at least one row per batch");
    }
    const std::size_t nb = static_cast<std::size_t>(batches);
    std::vector<double> values;
    std::size_t begin = 0;
    for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t len = n / nb + (b < n % nb ? 1 : 0);
        values.push_back(stat(begin, begin + len));
        begin += len;
    }
    const double mean = mean_of(values);
    CompensatedSum ss;
    for (double v : values) {
        ss.add((v - mean) * (v - mean));
    }
    return std::sqrt(ss.value() / (nb - 1.0) / static_cast<double>(nb));
}

MomentReport estimate_moments(int d, const std::vector<TestFunction>& phis, int p_max,
                              std::int64_t n_samples, std::uint64_t seed,
                              const std::vector<std::vector<int>>& mixed,
                              const SamplingOptions& opts) {
    if (p_max < 2 || p_max > 6) {
        throw std::invalid_argument("estimate_moments: p_max must be in 2..6");
    }
    if (n_samples < kMomentBatches) {
        throw std::invalid_argument("estimate_moments: need at least 100 samples");
    }
    if (p_max >= 4 && n_samples < 10000) {
        throw std::invalid_argument("estimate_moments: p_max >= 4 needs at least 10^4 samples");
    }
    for (const auto& cols : mixed) {
        if (cols.empty()) {
            throw std::invalid_argument("estimate_moments: empty mixed tuple");
        }
        for (int c : cols) {
            if (c < 0 || c >= static_cast<int>(phis.size())) {
                throw std::invalid_argument("estimate_moments: mixed tuple index out of range");
            }
        }
    }
    MomentReport report;
    report.degree = d;
    report.seed = seed;
    report.p_max = p_max;
    report.table = collect_statistics(d, phis, n_samples, seed, opts);
    report.n_samples = static_cast<std::int64_t>(report.table.values.size());
    report.failures = report.table.failures;
    for (std::size_t j = 0; j < phis.size(); ++j) {
        const std::vector<double> x = column(report.table, j);
        PhiMoments pm;
        pm.phi = phis[j].describe();
        pm.mean = with_batches(x, [](std::span<const double> v) { return mean_of(v); });
        pm.central.resize(static_cast<std::size_t>(p_max) + 1);
        for (int p = 2; p <= p_max; ++p) {
            pm.central[p] =
                with_batches(x, [p](std::span<const double> v) { return central_moment(v, p); });
        }
        report.per_phi.push_back(std::move(pm));
    }
    const auto& rows = report.table.values;
    for (const auto& cols : mixed) {
        MixedMoment mm;
        mm.columns = cols;
        mm.moment.value = mixed_central_moment(rows, cols);
        mm.moment.standard_error = batch_standard_error(rows.size(), [&](std::size_t b,
                                                                         std::size_t e) {
            return mixed_central_moment(
                std::vector<std::vector<double>>(rows.begin() + b, rows.begin() + e), cols);
        });
        report.mixed.push_back(std::move(mm));
    }
    return report;
}

double ks_distance_normal(std::vector<double> x) {
    if (x.empty()) {
        throw std::invalid_argument("ks_distance_normal: empty sample");
    }
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double dist = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = normal_cdf(x[i]);
        dist = std::max({dist, (i + 1) / n - f, f - i / n});
    }
    return dist;
}

CltSummary clt_from_values(int d, const TestFunction& phi, std::vector<double> values,
                           SigmaSource source) {
    if (values.size() < static_cast<std::size_t>(kMomentBatches)) {
        throw std::invalid_argument("clt: need at least 100 samples");
    }
    CltSummary out;
    out.degree = d;
    out.phi = phi.describe();
    out.center = std::sqrt(static_cast<double>(d)) / kPi * phi.integral();
    if (source == SigmaSource::kac_rice) {
        out.scale = std::pow(static_cast<double>(d), 0.25) * sigma_estimate(d) *
                    std::sqrt(phi.integral_sq());
    } else {
        out.scale = std::sqrt(central_moment(values, 2));
    }
    if (!(out.scale > 0.0)) {
        throw std::domain_error("clt: degenerate normalization (zero variance)");
    }
    for (double& v : values) {
        v = (v - out.center) / out.scale;
    }
    const std::span<const double> x(values);
    out.mean = with_batches(x, [](std::span<const double> v) { return mean_of(v); });
    out.variance = with_batches(x, [](std::span<const double> v) { return central_moment(v, 2); });
    out.skewness = with_batches(x, [](std::span<const double> v) {
        return central_moment(v, 3) / std::pow(central_moment(v, 2), 1.5);
    });
    out.kurtosis = with_batches(x, [](std::span<const double> v) {
        const double m2 = central_moment(v, 2);
        return central_moment(v, 4) / (m2 * m2);
    });
    out.ks = ks_distance_normal(values);
    out.normalized = std::move(values);
    return out;
}

CltSummary clt_diagnostics(int d, const TestFunction& phi, std::int64_t n_samples,
                           std::uint64_t seed, SigmaSource source, const SamplingOptions& opts) {
    const StatisticTable t = collect_statistics(d, {phi}, n_samples, seed, opts);
    return clt_from_values(d, phi, column(t, 0), source);
}

std::vector<LlnPoint> lln_trajectory(const std::vector<int>& d_list, const TestFunction& phi,
                                     std::uint64_t seed, const SamplingOptions& opts) {
    const bool need_angles = phi.kind() != TestFunction::Kind::constant_one;
    std::vector<LlnPoint> out;
    for (std::size_t j = 0; j < d_list.size(); ++j) {
        const int d = d_list[j];
        if (d < 1) {
            throw std::invalid_argument("lln_trajectory: degrees must be positive");
        }
        const KostlanSample s = sample(d, seed, j, static_cast<std::uint64_t>(d));
        const RootSet rs = need_angles ? locate_roots(s, opts.tol, opts.locate)
                                       : count_roots(s, opts.locate);
        out.push_back({d, linear_statistic(rs, phi) / std::sqrt(static_cast<double>(d)),
                       phi.integral() / kPi});
    }
    return out;
}

int lln_decreasing_steps(const std::vector<LlnPoint>& trajectory) {
    int steps = 0;
    for (std::size_t j = 1; j < trajectory.size(); ++j) {
        const double before = std::abs(trajectory[j - 1].value - trajectory[j - 1].limit);
        const double after = std::abs(trajectory[j].value - trajectory[j].limit);
        steps += after < before ? 1 : 0;
    }
    return steps;
}

namespace {

ProbabilityPoint frequency(int d, const StatisticTable& t) {
    ProbabilityPoint p;
    p.degree = d;
    p.n = static_cast<std::int64_t>(t.values.size());
    CompensatedSum hits;
    for (const auto& row : t.values) {
        hits.add(row[0]);
    }
    p.probability = hits.value() / static_cast<double>(p.n);
    p.standard_error = std::sqrt(p.probability * (1.0 - p.probability) / static_cast<double>(p.n));
    return p;
}

}  // namespace

std::vector<ProbabilityPoint> hole_probability(const std::vector<int>& d_list, double a,
                                               double b, std::int64_t n_samples,
                                               std::uint64_t seed, const SamplingOptions& opts) {
    if (!(a >= 0.0 && a < b && b <= kPi)) {
        throw std::invalid_argument("hole_probability: need 0 <= a < b <= pi");
    }
    if (b - a < 0.1) {
        throw std::invalid_argument("hole_probability: window length must be at least 0.1");
    }
    const bool full = a == 0.0 && b == kPi;
    std::vector<ProbabilityPoint> out;
    for (int d : d_list) {
        const StatisticTable t = collect(d, n_samples, seed, !full, opts, [&](const RootSet& rs) {
            const int inside = full ? rs.count : count_in_window(rs, a, b);
            return std::vector<double>{inside == 0 ? 1.0 : 0.0};
        });
        out.push_back(frequency(d, t));
    }
    return out;
}

std::vector<ProbabilityPoint> concentration_curve(const std::vector<int>& d_list,
                                                  const TestFunction& phi, double eps,
                                                  std::int64_t n_samples, std::uint64_t seed,
                                                  const SamplingOptions& opts) {
    if (!(eps > 0.0)) {
        throw std::invalid_argument("concentration_curve: eps must be positive");
    }
    const bool need_angles = phi.kind() != TestFunction::Kind::constant_one;
    std::vector<ProbabilityPoint> out;
    for (int d : d_list) {
        const double root_d = std::sqrt(static_cast<double>(d));
        const double mean = root_d / kPi * phi.integral();
        const StatisticTable t =
            collect(d, n_samples, seed, need_angles, opts, [&](const RootSet& rs) {
                const double dev = std::abs(linear_statistic(rs, phi) - mean) / root_d;
                return std::vector<double>{dev > eps ? 1.0 : 0.0};
            });
        out.push_back(frequency(d, t));
    }
    return out;
}

}  // namespace kostlan
