#include <doctest.h>

#include <cmath>
#include <random>

#include "kostlan/kacrice.hpp"
#include "kostlan/moments.hpp"

using namespace kostlan;

namespace {

double midpoint_integral(const TestFunction& f, bool squared) {
    const int n = 2000000;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = f(kPi * (i + 0.5) / n);
        s += squared ? v * v : v;
    }
    return s * kPi / n;
}

const MomentReport& report_d100() {
    static const MomentReport r = [] {
        SamplingOptions opts;
        return estimate_moments(100, {TestFunction::one()}, 4, 100000, 7, {}, opts);
    }();
    return r;
}

}  // namespace

TEST_CASE("test function parsing and description round trip") {
    for (const std::string s :
         {"one", "cos:1", "sin:3", "ind:0:1.5707963267948966", "tab:0=1,1=2,2=0.5"}) {
        const TestFunction f = TestFunction::parse(s);
        const TestFunction g = TestFunction::parse(f.describe());
        for (double th : {0.0, 0.4, 1.3, 2.9}) {
            CHECK(f(th) == g(th));
        }
    }
    CHECK(TestFunction::parse("ind:0:pi/2")(1.0) == 1.0);
    CHECK(TestFunction::parse("ind:0:pi/2")(2.0) == 0.0);
    CHECK_THROWS_AS(TestFunction::parse("cos:0"), std::invalid_argument);
    CHECK_THROWS_AS(TestFunction::parse("ind:1:0.5"), std::invalid_argument);
    CHECK_THROWS_AS(TestFunction::parse("tab:1=1,0.5=2"), std::invalid_argument);
    CHECK_THROWS_AS(TestFunction::parse("wave"), std::invalid_argument);
}

TEST_CASE("test functions live on RP^1") {
    for (const std::string s : {"one", "cos:1", "sin:2", "cos:5"}) {
        const TestFunction f = TestFunction::parse(s);
        for (double th : {0.1, 0.8, 2.5}) {
            CHECK(f(th + kPi) == doctest::Approx(f(th)).epsilon(1e-12).scale(1.0));
        }
    }
    CHECK(TestFunction::fourier(1, TestFunction::Trig::cos)(0.3) == doctest::Approx(std::cos(0.6)));
}

TEST_CASE("integrals of test functions") {
    const TestFunction one = TestFunction::one();
    CHECK(one.integral() == doctest::Approx(kPi));
    CHECK(one.integral_sq() == doctest::Approx(kPi));
    const TestFunction c = TestFunction::parse("cos:2");
    CHECK(std::fabs(c.integral()) < 1e-15);
    CHECK(c.integral_sq() == doctest::Approx(kPi / 2));
    const TestFunction ind = TestFunction::indicator(0.3, 1.2);
    CHECK(ind.integral() == doctest::Approx(0.9));
    CHECK(ind.integral_sq() == doctest::Approx(0.9));
    const TestFunction tab = TestFunction::parse("tab:0.2=1,1=-2,2.5=0.5");
    CHECK(std::fabs(tab.integral() - midpoint_integral(tab, false)) < 1e-10);
    CHECK(std::fabs(tab.integral_sq() - midpoint_integral(tab, true)) < 1e-10);
}

TEST_CASE("linear statistics") {
    RootSet rs;
    rs.degree = 2;
    rs.count = 2;
    rs.angles = std::vector<double>{0.0, kPi / 2};
    CHECK(linear_statistic(rs, TestFunction::one()) == 2.0);
    CHECK(std::fabs(linear_statistic(rs, TestFunction::parse("cos:1"))) < 1e-15);
    RootSet one;
    one.degree = 1;
    one.count = 1;
    one.angles = std::vector<double>{kPi / 4};
    CHECK(linear_statistic(one, TestFunction::indicator(0, kPi / 2)) == 1.0);
    RootSet bare;
    bare.degree = 3;
    bare.count = 3;
    CHECK(linear_statistic(bare, TestFunction::one()) == 3.0);
    CHECK_THROWS_AS(linear_statistic(bare, TestFunction::parse("cos:1")), std::invalid_argument);
}

TEST_CASE("central moment estimators") {
    const std::vector<double> x{1, 2, 3, 4};
    CHECK(central_moment(x, 2) == doctest::Approx(1.25));
    CHECK(std::fabs(central_moment(x, 3)) < 1e-15);
    CHECK(central_moment(x, 4) == doctest::Approx(2.5625));
    const std::vector<std::vector<double>> rows{{1, 2}, {2, 4}, {3, 6}, {4, 8}};
    CHECK(mixed_central_moment(rows, {0, 1}) == doctest::Approx(2.5));
    CHECK(mixed_central_moment(rows, {0, 0}) == doctest::Approx(1.25));

    std::mt19937_64 gen(1);
    std::normal_distribution<double> g;
    std::vector<double> z(100000);
    for (auto& v : z) {
        v = g(gen);
    }
    const double se = batch_standard_error(z.size(), [&](std::size_t b, std::size_t e) {
        double s = 0.0;
        for (std::size_t i = b; i < e; ++i) {
            s += z[i];
        }
        return s / static_cast<double>(e - b);
    });
    CHECK(se == doctest::Approx(1.0 / std::sqrt(1e5)).epsilon(0.25));
}

TEST_CASE("degree 1: mean 1 and vanishing central moments") {
    const MomentReport r = estimate_moments(1, {TestFunction::one()}, 6, 10000, 3);
    REQUIRE(r.per_phi.size() == 1);
    CHECK(r.per_phi[0].mean.value == 1.0);
    for (int p = 2; p <= 6; ++p) {
        CHECK(r.per_phi[0].central[p].value == 0.0);
    }
}

TEST_CASE("estimate_moments preconditions") {
    CHECK_THROWS_AS(estimate_moments(10, {TestFunction::one()}, 4, 5000, 1), std::invalid_argument);
    CHECK_THROWS_AS(estimate_moments(10, {TestFunction::one()}, 7, 20000, 1), std::invalid_argument);
    CHECK_THROWS_AS(estimate_moments(10, {TestFunction::one()}, 2, 50, 1), std::invalid_argument);
    CHECK_THROWS_AS(estimate_moments(10, {TestFunction::one()}, 2, 200, 1, {{0, 3}}),
                    std::invalid_argument);
}

TEST_CASE("d=100: mean count and fourth moment ratio") {
    const MomentReport& r = report_d100();
    const PhiMoments& m = r.per_phi[0];
    CHECK(std::fabs(m.mean.value - 10.0) < 3 * m.mean.standard_error);
    CHECK(m.central[2].value > 0.0);
    CHECK(m.central[2].standard_error > 0.0);
    const auto& v = r.table.values;
    std::vector<double> col;
    for (const auto& row : v) {
        col.push_back(row[0]);
    }
    auto ratio = [&](std::size_t b, std::size_t e) {
        std::span<const double> s(col.data() + b, e - b);
        const double m2 = central_moment(s, 2);
        return central_moment(s, 4) / (m2 * m2);
    };
    const double k = ratio(0, col.size());
    const double se = batch_standard_error(col.size(), ratio);
    CHECK_MESSAGE(std::fabs(k - 3.0) < 3 * se, "m4/m2^2 = " << k << " se " << se);
    // Boundedness: every count is at most d.
    for (double c : col) {
        CHECK(c <= 100.0);
    }
}

TEST_CASE("odd moments are suppressed") {
    for (int d : {100, 400}) {
        const std::int64_t n = d == 100 ? 100000 : 20000;
        const MomentReport r =
            d == 100 ? report_d100() : estimate_moments(d, {TestFunction::one()}, 4, n, 11);
        const double m3 = std::fabs(r.per_phi[0].central[3].value);
        const double m4 = r.per_phi[0].central[4].value;
        CHECK_MESSAGE(m3 * 3 <= std::pow(m4, 0.75), "d=" << d << " m3=" << m3 << " m4=" << m4);
    }
}

TEST_CASE("results do not depend on the worker count") {
    const std::vector<TestFunction> phis{TestFunction::one(), TestFunction::parse("cos:1"),
                                         TestFunction::parse("ind:0:pi/2")};
    SamplingOptions base;
    const StatisticTable ref = collect_statistics(30, phis, 3000, 5, base);
    for (int w : {4, 16}) {
        SamplingOptions o;
        o.workers = w;
        const StatisticTable t = collect_statistics(30, phis, 3000, 5, o);
        CHECK(t.values == ref.values);
    }
    SamplingOptions o16;
    o16.workers = 16;
    const MomentReport a = estimate_moments(30, phis, 3, 3000, 5, {{0, 1}}, base);
    const MomentReport b = estimate_moments(30, phis, 3, 3000, 5, {{0, 1}}, o16);
    for (std::size_t j = 0; j < phis.size(); ++j) {
        CHECK(a.per_phi[j].mean.value == b.per_phi[j].mean.value);
        CHECK(a.per_phi[j].central[3].standard_error == b.per_phi[j].central[3].standard_error);
    }
    CHECK(a.mixed[0].moment.value == b.mixed[0].moment.value);
}

TEST_CASE("KS distance") {
    std::mt19937_64 gen(2);
    std::normal_distribution<double> g;
    std::vector<double> z(20000);
    for (auto& v : z) {
        v = g(gen);
    }
    CHECK(ks_distance_normal(z) < 1.36 / std::sqrt(20000.0) * 1.5);
    for (auto& v : z) {
        v += 1.0;
    }
    CHECK(ks_distance_normal(z) > 0.3);
    CHECK(ks_distance_normal({0.0}) == doctest::Approx(0.5));
}

TEST_CASE("CLT diagnostics at d=200") {
    const StatisticTable t = collect_statistics(
        200, {TestFunction::one(), TestFunction::parse("cos:1")}, 100000, 21, {});
    std::vector<double> count;
    std::vector<double> cosv;
    for (const auto& row : t.values) {
        count.push_back(row[0]);
        cosv.push_back(row[1]);
    }
    SUBCASE("phi = 1, empirical normalization") {
        const CltSummary s = clt_from_values(200, TestFunction::one(), count, SigmaSource::empirical);
        CHECK(std::fabs(s.mean.value) < 3 * s.mean.standard_error + 1e-12);
        CHECK(std::fabs(s.variance.value - 1.0) < 3 * s.variance.standard_error + 1e-12);
        CHECK_MESSAGE(std::fabs(s.skewness.value) < 3 * s.skewness.standard_error,
                      "skewness " << s.skewness.value << " se " << s.skewness.standard_error);
        CHECK_MESSAGE(std::fabs(s.kurtosis.value - 3.0) < 3 * s.kurtosis.standard_error,
                      "kurtosis " << s.kurtosis.value << " se " << s.kurtosis.standard_error);
    }
    SUBCASE("phi = cos 2 theta, Kac-Rice normalization") {
        const TestFunction phi = TestFunction::parse("cos:1");
        const CltSummary s = clt_from_values(200, phi, cosv, SigmaSource::kac_rice);
        CHECK(s.scale == doctest::Approx(std::pow(200.0, 0.25) * sigma_estimate(200) *
                                         std::sqrt(kPi / 2)));
        // X scale^2 / (d^(1/4) sigma)^2 has variance ||phi||^2 = pi/2.
        const double unnormalized = s.variance.value * kPi / 2;
        CHECK(std::fabs(unnormalized - kPi / 2) < 3 * s.variance.standard_error * kPi / 2);
        CHECK(std::fabs(s.mean.value) < 3 * s.mean.standard_error);
    }
}

TEST_CASE("CLT negative control at d=2") {
    const CltSummary s =
        clt_diagnostics(2, TestFunction::one(), 20000, 4, SigmaSource::empirical);
    CHECK(s.ks > 0.2);
}

TEST_CASE("LLN trajectories") {
    const auto one = lln_trajectory({10, 40, 160}, TestFunction::one(), 1);
    REQUIRE(one.size() == 3);
    for (const auto& p : one) {
        CHECK(p.limit == doctest::Approx(1.0));
        CHECK(p.value > 0.0);
    }
    const auto half = lln_trajectory({50}, TestFunction::indicator(0, kPi / 2), 1);
    CHECK(half[0].limit == doctest::Approx(0.5));
    std::vector<LlnPoint> crafted{{1, 0.5, 1.0}, {2, 0.8, 1.0}, {3, 1.3, 1.0}, {4, 1.1, 1.0}};
    CHECK(lln_decreasing_steps(crafted) == 2);
}

TEST_CASE("hole probabilities") {
    SUBCASE("full window at d=2 is P(N = 0)") {
        const auto p = hole_probability({2}, 0.0, kPi, 100000, 9);
        CHECK(std::fabs(p[0].probability - (1 - std::sqrt(2.0) / 2)) < 3 * p[0].standard_error);
    }
    SUBCASE("d=1 root is uniform") {
        const auto p = hole_probability({1}, 0.4, 1.4, 50000, 9);
        CHECK(std::fabs(p[0].probability - (1 - 1.0 / kPi)) < 3 * p[0].standard_error);
    }
    CHECK_THROWS_AS(hole_probability({10}, 0.0, 0.05, 100, 1), std::invalid_argument);
}

TEST_CASE("concentration") {
    const auto c = concentration_curve({25, 100, 400}, TestFunction::one(), 0.5, 10000, 13);
    CHECK(c[2].probability < 0.01);
    // Chebyshev bound sigma^2 / (eps^2 sqrt(d)).
    const double sigma = sigma_estimate(400);
    CHECK(c[2].probability <= sigma * sigma / (0.25 * 20.0));
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        const double tol = 2 * std::hypot(c[i].standard_error, c[i + 1].standard_error);
        CHECK(c[i + 1].probability <= c[i].probability + tol);
    }
    for (const auto& p : concentration_curve({4, 16, 64}, TestFunction::one(), 10.0, 2000, 13)) {
        CHECK(p.probability == 0.0);
    }
}

TEST_CASE("MonteCarloFailure carries its counts") {
    const MonteCarloFailure f(3, 1000);
    CHECK(f.failures() == 3);
    CHECK(f.attempted() == 1000);
}
