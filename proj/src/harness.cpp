#include "kostlan/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "kostlan/kacrice.hpp"
#include "kostlan/moments.hpp"
#include "kostlan/partitions.hpp"
#include "kostlan/rootcount.hpp"

#ifndef KOSTLAN_VERSION
#define KOSTLAN_VERSION "0.1.0"
#endif

namespace kostlan {

namespace {

const std::vector<std::string> kSubcommands{"sample",  "roots", "moments", "kacrice",      "clt",
                                            "lln",     "hole",  "concentration", "partitions"};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void write(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw std::runtime_error("cannot write " + path.string());
        }
        auto line = [&](const std::vector<std::string>& fields) {
            for (std::size_t i = 0; i < fields.size(); ++i) {
                out << (i ? "," : "") << csv_field(fields[i]);
            }
            out << "\r\n";
        };
        line(header);
        for (const auto& r : rows) {
            line(r);
        }
        if (!out) {
            throw std::runtime_error("write failed: " + path.string());
        }
    }
};

// A failing self-test still persists its table.
class SelfTestFailure : public std::runtime_error {
public:
    explicit SelfTestFailure(Table t)
        : std::runtime_error("partitions self-test failed"), table(std::move(t)) {}
    Table table;
};

std::string num(double x) { return csv_number(x); }
std::string num(std::int64_t x) { return std::to_string(x); }
std::string num(int x) { return std::to_string(x); }

template <class T>
T get_field(const nlohmann::json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config field '") + key + "': " + e.what());
    }
}

// Runs body(i) for i in [0, n) on the requested number of threads; each
// index is handled exactly once and results are stored by index.
template <class Body>
void parallel_indices(std::int64_t n, int workers, Body body) {
    std::atomic<std::int64_t> next{0};
    std::exception_ptr fatal;
    std::mutex mu;
    auto work = [&] {
        while (true) {
            const std::int64_t i = next.fetch_add(1);
            if (i >= n) {
                return;
            }
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!fatal) {
                    fatal = std::current_exception();
                }
                next.store(n);
                return;
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    if (fatal) {
        std::rethrow_exception(fatal);
    }
}

std::vector<TestFunction> parse_phis(const ExperimentConfig& c) {
    std::vector<TestFunction> out;
    for (const auto& s : c.phis) {
        out.push_back(TestFunction::parse(s));
    }
    return out;
}

SamplingOptions sampling(const ExperimentConfig& c) {
    SamplingOptions o;
    o.workers = c.workers;
    o.tol = c.root_tolerance;
    return o;
}

std::map<std::string, Table> recipe_sample(const ExperimentConfig& c) {
    Table t{{"d", "index", "k", "coefficient"}, {}};
    for (int d : c.degrees) {
        for (std::int64_t i = 0; i < c.n_samples; ++i) {
            const KostlanSample s = sample(d, c.seed, static_cast<std::uint64_t>(i),
                                           static_cast<std::uint64_t>(d));
            for (int k = 0; k <= d; ++k) {
                t.rows.push_back({num(d), num(i), num(k), num(s.coeffs()[k])});
            }
        }
    }
    return {{"sample", t}};
}

std::map<std::string, Table> recipe_roots(const ExperimentConfig& c) {
    Table t{{"d", "index", "count", "method", "angles"}, {}};
    for (int d : c.degrees) {
        std::vector<RootSet> sets(static_cast<std::size_t>(c.n_samples));
        parallel_indices(c.n_samples, c.workers, [&](std::int64_t i) {
            const KostlanSample s = sample(d, c.seed, static_cast<std::uint64_t>(i),
                                           static_cast<std::uint64_t>(d));
            sets[i] = locate_roots(s, c.root_tolerance);
        });
        for (std::int64_t i = 0; i < c.n_samples; ++i) {
            std::string angles;
            for (double a : *sets[i].angles) {
                angles += (angles.empty() ? "" : " ") + num(a);
            }
            t.rows.push_back({num(d), num(i), num(sets[i].count),
                              std::string(to_string(sets[i].method)), angles});
        }
    }
    return {{"roots", t}};
}

std::map<std::string, Table> recipe_moments(const ExperimentConfig& c) {
    const auto phis = parse_phis(c);
    Table t;
    t.header = {"d", "phi", "mean"};
    for (int p = 2; p <= c.p_max; ++p) {
        t.header.push_back("m" + std::to_string(p));
    }
    t.header.push_back("se_mean");
    for (int p = 2; p <= c.p_max; ++p) {
        t.header.push_back("se_m" + std::to_string(p));
    }
    t.header.push_back("n");
    t.header.push_back("failures");
    Table mixed{{"d", "columns", "moment", "se", "n"}, {}};
    for (int d : c.degrees) {
        const MomentReport r =
            estimate_moments(d, phis, c.p_max, c.n_samples, c.seed, c.mixed, sampling(c));
        for (const auto& pm : r.per_phi) {
            std::vector<std::string> row{num(d), pm.phi, num(pm.mean.value)};
            for (int p = 2; p <= c.p_max; ++p) {
                row.push_back(num(pm.central[p].value));
            }
            row.push_back(num(pm.mean.standard_error));
            for (int p = 2; p <= c.p_max; ++p) {
                row.push_back(num(pm.central[p].standard_error));
            }
            row.push_back(num(r.n_samples));
            row.push_back(num(r.failures));
            t.rows.push_back(std::move(row));
        }
        for (const auto& mm : r.mixed) {
            std::string cols;
            for (int k : mm.columns) {
                cols += (cols.empty() ? "" : " ") + std::to_string(k);
            }
            mixed.rows.push_back({num(d), cols, num(mm.moment.value),
                                  num(mm.moment.standard_error), num(r.n_samples)});
        }
    }
    std::map<std::string, Table> out{{"moments", t}};
    if (!c.mixed.empty()) {
        out.emplace("moments_mixed", mixed);
    }
    return out;
}

std::map<std::string, Table> recipe_kacrice(const ExperimentConfig& c) {
    Table t{{"d", "density_1", "variance_prediction", "sigma_estimate"}, {}};
    Table r2{{"d", "delta", "density_2"}, {}};
    for (int d : c.degrees) {
        const double var = variance_prediction(d);
        const double sigma = sigma_estimate(d);
        t.rows.push_back({num(d), num(density_1(d)), num(var), num(sigma)});
        std::printf("d=%d density_1=%s variance_prediction=%s sigma_estimate=%s\n", d,
                    num(density_1(d)).c_str(), num(var).c_str(), num(sigma).c_str());
        for (double delta : c.deltas) {
            r2.rows.push_back({num(d), num(delta), num(density_2(d, delta))});
        }
    }
    std::map<std::string, Table> out{{"kacrice", t}};
    if (!c.deltas.empty()) {
        out.emplace("kacrice_density2", r2);
    }
    return out;
}

std::map<std::string, Table> recipe_clt(const ExperimentConfig& c) {
    const auto phis = parse_phis(c);
    const SigmaSource source =
        c.sigma_source == "empirical" ? SigmaSource::empirical : SigmaSource::kac_rice;
    Table t{{"d", "phi", "sigma_source", "n", "center", "scale", "mean", "se_mean", "variance",
             "se_variance", "skewness", "se_skewness", "kurtosis", "se_kurtosis", "ks"},
            {}};
    for (int d : c.degrees) {
        const StatisticTable table = collect_statistics(d, phis, c.n_samples, c.seed, sampling(c));
        for (std::size_t j = 0; j < phis.size(); ++j) {
            std::vector<double> col;
            for (const auto& row : table.values) {
                col.push_back(row[j]);
            }
            const CltSummary s = clt_from_values(d, phis[j], std::move(col), source);
            t.rows.push_back({num(d), s.phi, c.sigma_source,
                              num(static_cast<std::int64_t>(s.normalized.size())), num(s.center),
                              num(s.scale), num(s.mean.value), num(s.mean.standard_error),
                              num(s.variance.value), num(s.variance.standard_error),
                              num(s.skewness.value), num(s.skewness.standard_error),
                              num(s.kurtosis.value), num(s.kurtosis.standard_error), num(s.ks)});
        }
    }
    return {{"clt", t}};
}

std::map<std::string, Table> recipe_lln(const ExperimentConfig& c) {
    Table t{{"d", "phi", "value", "limit"}, {}};
    for (const auto& phi : parse_phis(c)) {
        for (const auto& p : lln_trajectory(c.degrees, phi, c.seed, sampling(c))) {
            t.rows.push_back({num(p.degree), phi.describe(), num(p.value), num(p.limit)});
        }
    }
    return {{"lln", t}};
}

std::map<std::string, Table> recipe_hole(const ExperimentConfig& c) {
    Table t{{"d", "a", "b", "probability", "se", "n"}, {}};
    for (const auto& p :
         hole_probability(c.degrees, c.window_a, c.window_b, c.n_samples, c.seed, sampling(c))) {
        t.rows.push_back({num(p.degree), num(c.window_a), num(c.window_b), num(p.probability),
                          num(p.standard_error), num(p.n)});
    }
    return {{"hole", t}};
}

std::map<std::string, Table> recipe_concentration(const ExperimentConfig& c) {
    Table t{{"d", "phi", "epsilon", "probability", "se", "n"}, {}};
    for (const auto& phi : parse_phis(c)) {
        for (const auto& p :
             concentration_curve(c.degrees, phi, c.epsilon, c.n_samples, c.seed, sampling(c))) {
            t.rows.push_back({num(p.degree), phi.describe(), num(c.epsilon), num(p.probability),
                              num(p.standard_error), num(p.n)});
        }
    }
    return {{"concentration", t}};
}

std::map<std::string, Table> recipe_partitions(const ExperimentConfig& c) {
    if (c.selftest) {
        Table t{{"check", "passed", "detail"}, {}};
        bool ok = true;
        for (const auto& check : partitions_selftest(c.seed)) {
            t.rows.push_back({check.name, check.passed ? "true" : "false", check.detail});
            std::printf("%s %s: %s\n", check.passed ? "PASS" : "FAIL", check.name.c_str(),
                        check.detail.c_str());
            ok = ok && check.passed;
        }
        if (!ok) {
            throw SelfTestFailure(std::move(t));
        }
        return {{"partitions", t}};
    }
    Table t{{"family", "size", "count"}, {}};
    for (int n = 1; n <= 10; ++n) {
        t.rows.push_back({"partitions", num(n),
                          num(static_cast<std::int64_t>(enumerate_partitions(n).size()))});
    }
    for (int p = 1; p <= 12; ++p) {
        t.rows.push_back({"pair_partitions", num(p),
                          num(static_cast<std::int64_t>(enumerate_pair_partitions(p).size()))});
    }
    for (int p = 1; p <= 8; ++p) {
        t.rows.push_back(
            {"double_pair_partitions", num(p),
             num(static_cast<std::int64_t>(enumerate_double_pair_partitions(p).size()))});
    }
    return {{"partitions", t}};
}

std::map<std::string, Table> dispatch(const ExperimentConfig& c) {
    const std::string& s = c.subcommand;
    if (s == "sample") return recipe_sample(c);
    if (s == "roots") return recipe_roots(c);
    if (s == "moments") return recipe_moments(c);
    if (s == "kacrice") return recipe_kacrice(c);
    if (s == "clt") return recipe_clt(c);
    if (s == "lln") return recipe_lln(c);
    if (s == "hole") return recipe_hole(c);
    if (s == "concentration") return recipe_concentration(c);
    if (s == "partitions") return recipe_partitions(c);
    throw std::invalid_argument("unknown subcommand: " + s);
}

// Brute-force transitive closure of the threshold graph (O(n^3)).
Partition closure_partition(const std::vector<double>& thetas, double threshold) {
    const std::size_t n = thetas.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            reach[a][b] = a == b || geodesic_distance(thetas[a], thetas[b]) <= threshold;
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) {
                reach[a][b] = reach[a][b] || (reach[a][k] && reach[k][b]);
            }
        }
    }
    std::vector<std::vector<int>> blocks;
    std::vector<bool> placed(n, false);
    for (std::size_t a = 0; a < n; ++a) {
        if (placed[a]) {
            continue;
        }
        std::vector<int> block;
        for (std::size_t b = 0; b < n; ++b) {
            if (reach[a][b]) {
                placed[b] = true;
                block.push_back(static_cast<int>(b) + 1);
            }
        }
        blocks.push_back(std::move(block));
    }
    return Partition(range_set(static_cast<int>(n)), std::move(blocks));
}

}  // namespace

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') {
            out += '"';
        }
        out += ch;
    }
    out += '"';
    return out;
}

std::string csv_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string build_version() { return KOSTLAN_VERSION; }

nlohmann::json to_json(const ExperimentConfig& c) {
    return nlohmann::json{{"subcommand", c.subcommand},
                          {"degrees", c.degrees},
                          {"n_samples", c.n_samples},
                          {"p_max", c.p_max},
                          {"phis", c.phis},
                          {"mixed", c.mixed},
                          {"window", {c.window_a, c.window_b}},
                          {"seed", c.seed},
                          {"workers", c.workers},
                          {"output_dir", c.output_dir},
                          {"epsilon", c.epsilon},
                          {"sigma_source", c.sigma_source},
                          {"root_tolerance", c.root_tolerance},
                          {"mc_draws", c.mc_draws},
                          {"deltas", c.deltas},
                          {"selftest", c.selftest}};
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw std::invalid_argument("config must be a JSON object");
    }
    static const std::set<std::string> known{
        "subcommand", "degrees",      "n_samples",      "p_max",    "phis",   "mixed",
        "window",     "seed",         "workers",        "output_dir", "epsilon",
        "sigma_source", "root_tolerance", "mc_draws",   "deltas",   "selftest"};
    for (const auto& item : j.items()) {
        if (!known.count(item.key())) {
            throw std::invalid_argument("unknown config key: " + item.key());
        }
    }
    ExperimentConfig c;
    if (j.contains("subcommand")) c.subcommand = get_field<std::string>(j, "subcommand");
    if (j.contains("degrees")) c.degrees = get_field<std::vector<int>>(j, "degrees");
    if (j.contains("n_samples")) c.n_samples = get_field<std::int64_t>(j, "n_samples");
    if (j.contains("p_max")) c.p_max = get_field<int>(j, "p_max");
    if (j.contains("phis")) c.phis = get_field<std::vector<std::string>>(j, "phis");
    if (j.contains("mixed")) c.mixed = get_field<std::vector<std::vector<int>>>(j, "mixed");
    if (j.contains("window")) {
        const auto w = get_field<std::vector<double>>(j, "window");
        if (w.size() != 2) {
            throw std::invalid_argument("config field 'window' needs two numbers");
        }
        c.window_a = w[0];
        c.window_b = w[1];
    }
    if (j.contains("seed")) c.seed = get_field<std::uint64_t>(j, "seed");
    if (j.contains("workers")) c.workers = get_field<int>(j, "workers");
    if (j.contains("output_dir")) c.output_dir = get_field<std::string>(j, "output_dir");
    if (j.contains("epsilon")) c.epsilon = get_field<double>(j, "epsilon");
    if (j.contains("sigma_source")) c.sigma_source = get_field<std::string>(j, "sigma_source");
    if (j.contains("root_tolerance")) c.root_tolerance = get_field<double>(j, "root_tolerance");
    if (j.contains("mc_draws")) c.mc_draws = get_field<std::int64_t>(j, "mc_draws");
    if (j.contains("deltas")) c.deltas = get_field<std::vector<double>>(j, "deltas");
    if (j.contains("selftest")) c.selftest = get_field<bool>(j, "selftest");
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open config file " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("config file " + path + ": " + e.what());
    }
    if (j.is_object() && j.contains("config") && j.contains("version")) {
        return config_from_json(j.at("config"));
    }
    return config_from_json(j);
}

void validate(const ExperimentConfig& c) {
    if (std::find(kSubcommands.begin(), kSubcommands.end(), c.subcommand) == kSubcommands.end()) {
        throw std::invalid_argument("unknown subcommand: " + c.subcommand);
    }
    if (c.subcommand != "partitions") {
        if (c.degrees.empty()) {
            throw std::invalid_argument("at least one degree is required");
        }
        for (int d : c.degrees) {
            if (d < 1) {
                throw std::invalid_argument("degrees must be positive");
            }
        }
    }
    if (c.n_samples < 1) {
        throw std::invalid_argument("n_samples must be positive");
    }
    if (c.p_max < 2 || c.p_max > 6) {
        throw std::invalid_argument("p_max must be in 2..6");
    }
    if (c.phis.empty()) {
        throw std::invalid_argument("at least one test function is required");
    }
    for (const auto& s : c.phis) {
        TestFunction::parse(s);
    }
    for (const auto& tuple : c.mixed) {
        for (int k : tuple) {
            if (k < 0 || k >= static_cast<int>(c.phis.size())) {
                throw std::invalid_argument("mixed tuple index out of range");
            }
        }
    }
    if (!(c.window_a >= 0.0 && c.window_a < c.window_b && c.window_b <= kPi)) {
        throw std::invalid_argument("window must satisfy 0 <= a < b <= pi");
    }
    if (c.workers < 1) {
        throw std::invalid_argument("workers must be positive");
    }
    if (!(c.epsilon > 0.0)) {
        throw std::invalid_argument("epsilon must be positive");
    }
    if (c.sigma_source != "kac_rice" && c.sigma_source != "empirical") {
        throw std::invalid_argument("sigma_source must be kac_rice or empirical");
    }
    if (!(c.root_tolerance > 1e-14 && c.root_tolerance < 1e-3)) {
        throw std::invalid_argument("root_tolerance must lie in (1e-14, 1e-3)");
    }
    if (c.mc_draws < kBatchCount) {
        throw std::invalid_argument("mc_draws must be at least 100");
    }
    if (c.output_dir.empty()) {
        throw std::invalid_argument("output_dir must not be empty");
    }
}

RunOutcome run_experiment(ExperimentConfig config) {
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) {
        config.output_dir = env;
    }
    const auto t0 = std::chrono::steady_clock::now();
    RunOutcome outcome;
    std::map<std::string, Table> tables;
    try {
        validate(config);
        tables = dispatch(config);
    } catch (SelfTestFailure& e) {
        tables.emplace(config.subcommand, std::move(e.table));
        outcome.exit_code = kExitNumerical;
        outcome.message = e.what();
    } catch (const std::invalid_argument& e) {
        outcome.exit_code = kExitValidation;
        outcome.message = e.what();
    } catch (const SingularConfiguration& e) {
        outcome.exit_code = kExitValidation;
        outcome.message = e.what();
    } catch (const std::exception& e) {
        outcome.exit_code = kExitNumerical;
        outcome.message = e.what();
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    namespace fs = std::filesystem;
    const fs::path dir(config.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    nlohmann::json outputs = nlohmann::json::array();
    for (const auto& [name, table] : tables) {
        const fs::path path = dir / (name + ".csv");
        table.write(path);
        outputs.push_back(path.filename().string());
        if (name == config.subcommand) {
            outcome.csv_path = path.string();
        }
    }
    nlohmann::json manifest{{"config", to_json(config)},
                            {"version", build_version()},
                            {"wall_time_seconds", wall},
                            {"exit_code", outcome.exit_code},
                            {"outputs", outputs},
                            {"error", outcome.message.empty() ? nlohmann::json(nullptr)
                                                              : nlohmann::json(outcome.message)}};
    const fs::path mpath = dir / (config.subcommand + "_manifest.json");
    std::ofstream mout(mpath);
    mout << manifest.dump(2) << "\n";
    if (!mout) {
        throw std::runtime_error("cannot write " + mpath.string());
    }
    outcome.manifest_path = mpath.string();
    return outcome;
}

std::vector<SelfTestCheck> partitions_selftest(std::uint64_t seed) {
    std::vector<SelfTestCheck> out;
    auto report = [&](std::string name, bool ok, std::string detail) {
        out.push_back({std::move(name), ok, std::move(detail)});
    };

    // Bell numbers from the Bell triangle.
    {
        std::vector<std::int64_t> row{1};
        bool ok = true;
        std::string detail;
        for (int n = 1; n <= 10; ++n) {
            std::vector<std::int64_t> next{row.back()};
            for (std::int64_t v : row) {
                next.push_back(next.back() + v);
            }
            const std::int64_t bell = row.back();
            auto parts = enumerate_partitions(n);
            const bool unique = std::adjacent_find(parts.begin(), parts.end()) == parts.end();
            ok = ok && unique && static_cast<std::int64_t>(parts.size()) == bell;
            detail += (n > 1 ? " " : "") + std::to_string(parts.size());
            row = std::move(next);
        }
        report("bell_counts_n_le_10", ok, "counts " + detail);
    }
    // |PP_p| = (2m)! / (2^m m!).
    {
        bool ok = true;
        for (int p = 1; p <= 12; ++p) {
            double expect = 0.0;
            if (p % 2 == 0) {
                const int m = p / 2;
                expect = std::tgamma(p + 1.0) / (std::pow(2.0, m) * std::tgamma(m + 1.0));
            }
            ok = ok && static_cast<double>(enumerate_pair_partitions(p).size()) == std::round(expect);
        }
        report("pair_partitions_p_le_12", ok, "|PP_p| = (2m)!/(2^m m!)");
    }
    // |C_p| = mu_p 2^(p/2), membership conditions and ||J|| = p/2.
    {
        bool ok = true;
        std::string detail;
        for (int p = 1; p <= 8; ++p) {
            const auto cp = enumerate_double_pair_partitions(p);
            const std::int64_t expect =
                p % 2 ? 0 : static_cast<std::int64_t>(enumerate_pair_partitions(p).size()) << (p / 2);
            ok = ok && static_cast<std::int64_t>(cp.size()) == expect;
            for (const auto& dp : cp) {
                ok = ok && is_double_pair_partition(dp) && dp.inner.size() == p / 2;
                for (const auto& jb : dp.inner.blocks()) {
                    if (jb.size() == 1) {
                        ok = ok && dp.outer.blocks()[jb[0] - 1].size() == 2;
                    }
                }
            }
            detail += (p > 1 ? " " : "") + std::to_string(cp.size());
        }
        report("double_pair_partitions_p_le_8", ok, "counts " + detail);
    }
    // Phi / Psi exhaustive round trip.
    {
        bool ok = true;
        for (int p : {2, 4, 6}) {
            std::set<std::pair<Partition, std::vector<std::vector<int>>>> images;
            for (const auto& dp : enumerate_double_pair_partitions(p)) {
                const PairSelection sel = phi_bijection(dp);
                ok = ok && psi_inverse(sel) == dp;
                for (const auto& b : sel.pairs.blocks()) {
                    ok = ok && b.size() == 2;
                }
                images.insert({sel.pairs, sel.selected});
            }
            std::size_t target = 0;
            for (const auto& pi : enumerate_pair_partitions(p)) {
                target += std::size_t{1} << pi.size();
                // Every (Pi, Sigma) must come back through Phi o Psi.
                for (std::size_t mask = 0; mask < (std::size_t{1} << pi.size()); ++mask) {
                    PairSelection sel{pi, {}};
                    for (int b = 0; b < pi.size(); ++b) {
                        if (mask & (std::size_t{1} << b)) {
                            sel.selected.push_back(pi.blocks()[b]);
                        }
                    }
                    ok = ok && phi_bijection(psi_inverse(sel)) == sel;
                }
            }
            ok = ok && images.size() == target;
        }
        report("phi_psi_round_trip_p_le_6", ok, "p in {2,4,6}");
    }
    // (A, I) -> (A, I_A) is a bijection onto {(A, J) : A subset B, J in P_A}.
    {
        bool ok = true;
        for (int n = 1; n <= 5; ++n) {
            const std::vector<int> ground = range_set(n);
            std::set<std::pair<std::vector<int>, Partition>> images;
            std::size_t pairs = 0;
            for (const auto& part : enumerate_partitions(n)) {
                for (const auto& a : adapted_subsets(part)) {
                    ++pairs;
                    const Partition ia = a.empty() ? Partition() : induced_partition(part, a);
                    images.insert({a, ia});
                    // Inverse: J plus the singletons of B \ A.
                    std::vector<std::vector<int>> blocks = ia.blocks();
                    for (int x : ground) {
                        if (!std::binary_search(a.begin(), a.end(), x)) {
                            blocks.push_back({x});
                        }
                    }
                    ok = ok && Partition(ground, std::move(blocks)) == part;
                }
            }
            std::size_t target = 0;
            for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
                std::vector<int> a;
                for (int x = 1; x <= n; ++x) {
                    if (mask >> (x - 1) & 1u) {
                        a.push_back(x);
                    }
                }
                target += a.empty() ? 1 : enumerate_partitions(a).size();
            }
            ok = ok && images.size() == pairs && pairs == target;
        }
        report("adapted_subset_bijection_n_le_5", ok, "ground sets of size 1..5");
    }
    std::mt19937_64 gen(seed);
    // Tuple decomposition on random instances.
    {
        bool ok = true;
        std::uniform_int_distribution<int> size(2, 8);
        std::uniform_int_distribution<int> kdist(2, 4);
        std::uniform_real_distribution<double> val(-1.0, 1.0);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> z(static_cast<std::size_t>(size(gen)));
            for (auto& x : z) {
                x = val(gen);
            }
            ok = ok && tuple_decomposition_check(z, kdist(gen));
        }
        report("tuple_decomposition_100_random", ok, "|Z| in 2..8, k in 2..4");
    }
    // Union-find clustering against the brute-force closure.
    {
        bool ok = true;
        std::uniform_int_distribution<int> size(1, 12);
        std::uniform_real_distribution<double> angle(0.0, kPi);
        std::uniform_real_distribution<double> thr(0.01, 0.6);
        for (int trial = 0; trial < 1000; ++trial) {
            std::vector<double> pts(static_cast<std::size_t>(size(gen)));
            for (auto& x : pts) {
                x = angle(gen);
            }
            const double t = thr(gen);
            ok = ok && clustering_partition(pts, t) == closure_partition(pts, t);
        }
        report("clustering_vs_closure_1000_random", ok, "n in 1..12");
    }
    return out;
}

}  // namespace kostlan
