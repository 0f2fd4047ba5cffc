// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number
// of failed criteria (0 when everything passes).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "kostlan/harness.hpp"
#include "kostlan/kacrice.hpp"
#include "kostlan/moments.hpp"
#include "kostlan/partitions.hpp"

using namespace kostlan;

namespace {

constexpr std::int64_t kLargeRun = 100000;
constexpr std::uint64_t kSeed = 20240601;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Run {
    StatisticTable table;
    double seconds = 0.0;

    std::vector<double> column(std::size_t j) const {
        std::vector<double> out;
        out.reserve(table.values.size());
        for (const auto& row : table.values) {
            out.push_back(row[j]);
        }
        return out;
    }
};

Run collect(int d, const std::vector<std::string>& phis, std::int64_t n) {
    std::vector<TestFunction> f;
    for (const auto& s : phis) {
        f.push_back(TestFunction::parse(s));
    }
    const auto t0 = Clock::now();
    Run r;
    r.table = collect_statistics(d, f, n, kSeed, {});
    r.seconds = seconds_since(t0);
    return r;
}

// Runs are shared between criteria; each is computed once on first use.
const Run& run_for(int d) {
    static std::map<int, Run> cache;
    auto it = cache.find(d);
    if (it == cache.end()) {
        std::vector<std::string> phis{"one"};
        if (d == 200) {
            phis = {"one", "cos:1"};
        } else if (d == 400) {
            phis = {"one", "cos:1", "ind:0:pi/2"};
        }
        it = cache.emplace(d, collect(d, phis, kLargeRun)).first;
    }
    return it->second;
}

EstimateWithError batch_estimate(std::size_t n,
                                 const std::function<double(std::size_t, std::size_t)>& stat) {
    return {stat(0, n), batch_standard_error(n, stat)};
}

std::function<double(std::size_t, std::size_t)> moment_of(const std::vector<double>& x, int p) {
    return [&x, p](std::size_t b, std::size_t e) {
        return central_moment(std::span<const double>(x.data() + b, e - b), p);
    };
}

double central_mean(const std::vector<double>& x, std::size_t b, std::size_t e) {
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) {
        s += x[i];
    }
    return s / static_cast<double>(e - b);
}

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        pass = pass && ok;
        if (!detail.empty()) {
            detail += "; ";
        }
        detail += what + (ok ? "" : " [x]");
    }
};

Verdict criterion_1() {
    Verdict v;
    for (int d : {4, 25, 100, 400}) {
        const Run& r = run_for(d);
        const std::vector<double> c = r.column(0);
        std::function<double(std::size_t, std::size_t)> mean = [&](std::size_t b, std::size_t e) {
            return central_mean(c, b, e);
        };
        const EstimateWithError m = batch_estimate(c.size(), mean);
        const double z = (m.value - std::sqrt(static_cast<double>(d))) / m.standard_error;
        v.require(std::fabs(z) <= 3.0, "d=" + std::to_string(d) + " mean " + fmt("%.4f", m.value) +
                                           " z " + fmt("%+.2f", z));
        v.require(std::fabs(kPi * density_1(d) - std::sqrt(static_cast<double>(d))) <= 1e-10,
                  "int R1 = sqrt(d)");
    }
    const double t400 = run_for(400).seconds;
    v.require(t400 < 600.0, "d=400 run " + fmt("%.0f", t400) + " s");
    return v;
}

Verdict criterion_2() {
    Verdict v;
    const Run d1 = collect(1, {"one"}, 10000);
    const std::vector<double> c1 = d1.column(0);
    const bool all_one = std::all_of(c1.begin(), c1.end(), [](double x) { return x == 1.0; });
    v.require(all_one && central_moment(c1, 2) == 0.0, "d=1 count == 1, var 0");
    const Run d2 = collect(2, {"one"}, kLargeRun);
    const std::vector<double> c2 = d2.column(0);
    const EstimateWithError var = batch_estimate(c2.size(), moment_of(c2, 2));
    const double target = 2.0 * std::sqrt(2.0) - 2.0;
    v.require(std::fabs(var.value - target) <= 3.0 * var.standard_error,
              "d=2 var " + fmt("%.5f", var.value) + " +- " + fmt("%.5f", var.standard_error));
    const double pred = variance_prediction(2);
    v.require(std::fabs(pred - target) <= 1e-6, "prediction(2) " + fmt("%.10f", pred));
    return v;
}

Verdict criterion_3() {
    Verdict v;
    for (int d : {50, 100, 200}) {
        const std::vector<double> c = run_for(d).column(0);
        const EstimateWithError m2 = batch_estimate(c.size(), moment_of(c, 2));
        const double pred = variance_prediction(d);
        v.require(std::fabs(m2.value - pred) <= 3.0 * m2.standard_error,
                  "d=" + std::to_string(d) + " MC " + fmt("%.4f", m2.value) + " pred " +
                      fmt("%.4f", pred) + " se " + fmt("%.4f", m2.standard_error));
    }
    double lo = 1e300;
    double hi = 0.0;
    for (int d : {100, 200, 400, 800}) {
        const double s = sigma_estimate(d);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    v.require(lo > 0.0 && (hi - lo) / lo < 0.02,
              "sigma in [" + fmt("%.5f", lo) + ", " + fmt("%.5f", hi) + "]");
    return v;
}

Verdict criterion_4() {
    Verdict v;
    const Run& r = run_for(200);
    const std::vector<double> c = r.column(0);
    const std::size_t n = c.size();
    auto ratio = [&](int p, double power) {
        return [&c, p, power](std::size_t b, std::size_t e) {
            const std::span<const double> s(c.data() + b, e - b);
            return central_moment(s, p) / std::pow(central_moment(s, 2), power);
        };
    };
    const EstimateWithError k4 = batch_estimate(n, ratio(4, 2.0));
    const EstimateWithError k6 = batch_estimate(n, ratio(6, 3.0));
    const EstimateWithError k3 = batch_estimate(n, ratio(3, 1.5));
    v.require(std::fabs(k4.value - 3.0) <= 3.0 * k4.standard_error,
              "m4/m2^2 " + fmt("%.4f", k4.value) + " +- " + fmt("%.4f", k4.standard_error));
    v.require(std::fabs(k6.value - 15.0) <= 4.0 * k6.standard_error,
              "m6/m2^3 " + fmt("%.3f", k6.value) + " +- " + fmt("%.3f", k6.standard_error));
    v.require(std::fabs(k3.value) <= 3.0 * k3.standard_error,
              "m3/m2^1.5 " + fmt("%.4f", k3.value) + " +- " + fmt("%.4f", k3.standard_error));

    // phi1 = phi2 = cos 2theta (column 1), phi3 = phi4 = 1 (column 0).
    const auto& rows = r.table.values;
    auto wick_gap = [&rows](std::size_t b, std::size_t e) {
        const std::vector<std::vector<double>> part(rows.begin() + static_cast<long>(b),
                                                    rows.begin() + static_cast<long>(e));
        const double m4 = mixed_central_moment(part, {1, 1, 0, 0});
        const double m11 = mixed_central_moment(part, {1, 1});
        const double m00 = mixed_central_moment(part, {0, 0});
        const double m10 = mixed_central_moment(part, {1, 0});
        return m4 - (m11 * m00 + 2.0 * m10 * m10);
    };
    const EstimateWithError gap = batch_estimate(rows.size(), wick_gap);
    v.require(std::fabs(gap.value) <= 3.0 * gap.standard_error,
              "mixed m4 - Wick " + fmt("%.3f", gap.value) + " +- " +
                  fmt("%.3f", gap.standard_error));
    return v;
}

Verdict criterion_5() {
    Verdict v;
    const Run& r = run_for(400);
    const std::vector<std::string> names{"one", "cos:1"};
    for (std::size_t j = 0; j < names.size(); ++j) {
        const CltSummary s = clt_from_values(400, TestFunction::parse(names[j]), r.column(j),
                                             SigmaSource::kac_rice);
        v.require(s.ks < 0.02, "d=400 phi=" + names[j] + " KS " + fmt("%.4f", s.ks));
    }
    const CltSummary neg = clt_from_values(2, TestFunction::one(), collect(2, {"one"}, kLargeRun).column(0),
                                           SigmaSource::kac_rice);
    v.require(neg.ks > 0.2, "d=2 control KS " + fmt("%.3f", neg.ks));
    return v;
}

Verdict criterion_6() {
    Verdict v;
    const auto one = lln_trajectory({100, 400}, TestFunction::one(), kSeed);
    const auto ind = lln_trajectory({100, 400}, TestFunction::indicator(0, kPi / 2), kSeed);
    v.require(std::fabs(one[0].limit - 1.0) < 1e-12 && std::fabs(ind[0].limit - 0.5) < 1e-12,
              "limit columns 1 and 1/2");

    const int seeds = 200;
    int good = 0;
    for (int s = 1; s <= seeds; ++s) {
        const auto t = lln_trajectory({100, 400, 1600, 6400}, TestFunction::one(),
                                      static_cast<std::uint64_t>(s));
        int dec = 0;
        for (std::size_t i = 0; i + 1 < t.size(); ++i) {
            dec += std::fabs(t[i + 1].value - t[i + 1].limit) < std::fabs(t[i].value - t[i].limit);
        }
        good += dec >= 2;
    }
    const double frac = static_cast<double>(good) / seeds;
    v.require(frac >= 0.9, "trajectory decreasing in >= 2 of 3 steps for " +
                               fmt("%.1f", 100.0 * frac) + "% of seeds");

    // Equidistribution: share of the zeros in [0, pi/2) over 10^4 samples.
    const Run& r = run_for(400);
    std::vector<double> share;
    for (std::size_t i = 0; i < 10000; ++i) {
        const auto& row = r.table.values[i];
        share.push_back(row[2] / row[0]);
    }
    std::function<double(std::size_t, std::size_t)> mean = [&](std::size_t b, std::size_t e) {
        return central_mean(share, b, e);
    };
    const EstimateWithError m = batch_estimate(share.size(), mean);
    v.require(std::fabs(m.value - 0.5) <= 3.0 * m.standard_error,
              "d=400 share " + fmt("%.4f", m.value) + " +- " + fmt("%.4f", m.standard_error));
    return v;
}

Verdict criterion_7() {
    Verdict v;
    const auto pts = hole_probability({20, 80, 320}, 0.0, kPi / 2, kLargeRun, kSeed);
    std::string seq;
    bool ok = true;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        seq += (i ? ", " : "") + fmt("%.2e", pts[i].probability);
        if (i) {
            ok = ok && pts[i].probability < pts[i - 1].probability &&
                 pts[i].probability < 0.5 * pts[i - 1].probability;
        }
    }
    v.require(ok, "P(hole) at d=20,80,320: " + seq);
    const auto one = hole_probability({1}, 0.0, kPi / 2, kLargeRun, kSeed);
    v.require(std::fabs(one[0].probability - 0.5) <= 3.0 * one[0].standard_error,
              "d=1 P " + fmt("%.4f", one[0].probability));
    return v;
}

Verdict criterion_8() {
    Verdict v;
    std::mt19937_64 gen(kSeed);
    std::uniform_real_distribution<double> u(0.0, kPi);
    std::uniform_int_distribution<int> deg(3, 120);
    int agree = 0;
    for (int i = 0; i < 20; ++i) {
        const int d = deg(gen);
        const double a = u(gen);
        double b = u(gen);
        while (geodesic_distance(a, b) < 0.05 / std::sqrt(static_cast<double>(d))) {
            b = u(gen);
        }
        Stream rng = make_stream(kSeed, static_cast<std::uint64_t>(i), 1000);
        const DensityEstimate e = density_k_mc(d, {a, b}, kLargeRun, rng);
        agree += std::fabs(e.estimate - density_2(d, std::fabs(a - b))) <= 3.0 * e.standard_error;
    }
    v.require(agree == 20, "k=2 MC vs closed form " + std::to_string(agree) + "/20");

    double worst = 0.0;
    for (int d : {100, 200, 400, 800}) {
        const double r1 = density_1(d);
        worst = std::max(worst,
                         std::fabs(density_2(d, 15.0 / std::sqrt(static_cast<double>(d))) - r1 * r1) /
                             (r1 * r1));
    }
    v.require(worst < 0.01, "factorization gap at sqrt(d) delta = 15: " + fmt("%.2e", worst));

    const int d = 100;
    Stream rng = make_stream(kSeed, 0, 1001);
    const DensityEstimate e =
        d_density(Partition::from_blocks({{1, 2}, {3}}), {0.3, 1.8}, d, 200000, rng);
    const double scale = std::pow(d, 0.75);
    v.require(std::fabs(e.estimate) + 3.0 * e.standard_error <= 0.01 * scale,
              "isolated singleton D = " + fmt("%.4f", e.estimate) + " +- " +
                  fmt("%.4f", e.standard_error) + " vs d^(3/4) " + fmt("%.1f", scale));
    return v;
}

Verdict criterion_9() {
    Verdict v;
    const auto t0 = Clock::now();
    const auto checks = partitions_selftest(kSeed);
    const double secs = seconds_since(t0);
    for (const auto& c : checks) {
        v.require(c.passed, c.name);
    }
    v.require(secs < 60.0, fmt("%.1f", secs) + " s");
    return v;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Verdict criterion_10() {
    Verdict v;
    namespace fs = std::filesystem;
    const fs::path root = fs::temp_directory_path() / "kostlan_acceptance_determinism";
    fs::remove_all(root);
    struct Case {
        std::string sub;
        std::vector<std::string> phis;
    };
    for (const Case& k : {Case{"moments", {"one", "cos:1", "ind:0:pi/2"}},
                          Case{"hole", {"one"}}, Case{"clt", {"one", "sin:2"}}}) {
        ExperimentConfig c;
        c.subcommand = k.sub;
        c.degrees = {30, 60};
        c.n_samples = 3000;
        c.p_max = 4 - (k.sub == "moments");
        c.phis = k.phis;
        if (k.sub == "moments") {
            c.mixed = {{0, 1}};
        }
        c.seed = kSeed;
        c.output_dir = (root / k.sub / "base").string();
        const RunOutcome base = run_experiment(c);
        bool same = base.exit_code == kExitOk;
        const std::string ref = slurp(base.csv_path);
        for (int w : {1, 4, 16}) {
            ExperimentConfig again = load_config(base.manifest_path);
            again.workers = w;
            again.output_dir = (root / k.sub / std::to_string(w)).string();
            const RunOutcome r = run_experiment(again);
            same = same && r.exit_code == kExitOk && slurp(r.csv_path) == ref;
        }
        v.require(same, k.sub + " rerun identical for 1/4/16 workers");
    }
    return v;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"C1 expectation", criterion_1},         {"C2 degree-1/2 oracles", criterion_2},
        {"C3 variance cross-validation", criterion_3}, {"C4 central moments", criterion_4},
        {"C5 CLT", criterion_5},                 {"C6 LLN", criterion_6},
        {"C7 hole probability", criterion_7},    {"C8 Kac-Rice structure", criterion_8},
        {"C9 combinatorics", criterion_9},       {"C10 determinism", criterion_10},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        const auto t0 = Clock::now();
        Verdict v;
        try {
            v = run();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("exception: ") + e.what();
        }
        failed += !v.pass;
        std::printf("%s %s (%.0f s): %s\n", v.pass ? "PASS" : "FAIL", name.c_str(),
                    seconds_since(t0), v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
                criteria.size());
    return failed;
}
