// kostlan: command line front end for the experiment recipes.
//
//   kostlan moments --d 100,200 --n 10000 --pmax 4 --phi one --phi cos:1
//   kostlan kacrice --d 2,100 --delta 0.1,0.5
//   kostlan clt --config results/clt_manifest.json
//
// Options given on the command line override the values read from --config.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kostlan/harness.hpp"

namespace {

struct Overrides {
    std::string config_path;
    std::vector<int> degrees;
    std::int64_t n_samples = 0;
    int p_max = 0;
    std::vector<std::string> phis;
    std::vector<std::string> mixed;
    std::vector<double> window;
    std::uint64_t seed = 0;
    int workers = 0;
    std::string output_dir;
    double epsilon = 0.0;
    std::string sigma_source;
    double root_tolerance = 0.0;
    std::int64_t mc_draws = 0;
    std::vector<double> deltas;
    bool selftest = false;
};

std::vector<int> parse_tuple(const std::string& s) {
    std::vector<int> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        const int v = std::stoi(item, &used);
        if (used != item.size()) {
            throw std::invalid_argument("bad mixed tuple: " + s);
        }
        out.push_back(v);
    }
    return out;
}

void add_options(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config_path, "JSON config or a previous run manifest");
    sub->add_option("--d", o.degrees, "Degrees (comma separated)")->delimiter(',');
    sub->add_option("--n", o.n_samples, "Samples per degree");
    sub->add_option("--pmax", o.p_max, "Highest central moment (2..6)");
    sub->add_option("--phi", o.phis, "Test function: one, cos:n, sin:n, ind:a:b, tab:t=v,...");
    sub->add_option("--mixed", o.mixed, "Mixed moment tuple of phi indices, e.g. 0,1");
    sub->add_option("--window", o.window, "Hole window a,b")->delimiter(',')->expected(2);
    sub->add_option("--seed", o.seed, "Master seed");
    sub->add_option("--workers", o.workers, "Worker threads");
    sub->add_option("--out", o.output_dir, "Output directory");
    sub->add_option("--eps", o.epsilon, "Concentration threshold");
    sub->add_option("--sigma", o.sigma_source, "CLT normalization: kac_rice or empirical");
    sub->add_option("--tol", o.root_tolerance, "Root angle accuracy");
    sub->add_option("--mc", o.mc_draws, "Monte Carlo draws for Kac-Rice densities");
    sub->add_option("--delta", o.deltas, "Separations for R^2 tabulation")->delimiter(',');
    sub->add_flag("--selftest", o.selftest, "Run the partitions property suite");
}

kostlan::ExperimentConfig build_config(const CLI::App* sub, const Overrides& o) {
    kostlan::ExperimentConfig c;
    if (!o.config_path.empty()) {
        c = kostlan::load_config(o.config_path);
    }
    c.subcommand = sub->get_name();
    auto given = [&](const char* name) { return sub->count(name) > 0; };
    if (given("--d")) c.degrees = o.degrees;
    if (given("--n")) c.n_samples = o.n_samples;
    if (given("--pmax")) c.p_max = o.p_max;
    if (given("--phi")) c.phis = o.phis;
    if (given("--mixed")) {
        c.mixed.clear();
        for (const auto& t : o.mixed) {
            c.mixed.push_back(parse_tuple(t));
        }
    }
    if (given("--window")) {
        c.window_a = o.window.at(0);
        c.window_b = o.window.at(1);
    }
    if (given("--seed")) c.seed = o.seed;
    if (given("--workers")) c.workers = o.workers;
    if (given("--out")) c.output_dir = o.output_dir;
    if (given("--eps")) c.epsilon = o.epsilon;
    if (given("--sigma")) c.sigma_source = o.sigma_source;
    if (given("--tol")) c.root_tolerance = o.root_tolerance;
    if (given("--mc")) c.mc_draws = o.mc_draws;
    if (given("--delta")) c.deltas = o.deltas;
    if (given("--selftest")) c.selftest = o.selftest;
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Zeros of random Kostlan polynomials on RP^1"};
    app.set_version_flag("--version", kostlan::build_version());
    app.require_subcommand(1);
    Overrides o;
    const std::vector<std::pair<const char*, const char*>> subs{
        {"sample", "Draw coefficient vectors"},
        {"roots", "Locate the zeros of sampled polynomials"},
        {"moments", "Central moments of linear statistics"},
        {"kacrice", "Kac-Rice densities and the variance prediction"},
        {"clt", "Normalized statistics against N(0, 1)"},
        {"lln", "d^{-1/2} <nu_d, phi> along a degree sequence"},
        {"hole", "Probability that no zero falls in a window"},
        {"concentration", "Deviation probabilities of d^{-1/2} <nu_d, phi>"},
        {"partitions", "Combinatorial tables and the property self-test"},
    };
    for (const auto& [name, help] : subs) {
        add_options(app.add_subcommand(name, help), o);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kostlan::kExitValidation;
    }

    kostlan::ExperimentConfig config;
    try {
        config = build_config(app.get_subcommands().front(), o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kostlan::kExitValidation;
    }
    kostlan::RunOutcome outcome;
    try {
        outcome = kostlan::run_experiment(config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kostlan::kExitNumerical;
    }
    if (outcome.exit_code != kostlan::kExitOk) {
        std::cerr << "error: " << outcome.message << "\n";
    }
    if (!outcome.csv_path.empty()) {
        std::printf("wrote %s\n", outcome.csv_path.c_str());
    }
    std::printf("manifest %s\n", outcome.manifest_path.c_str());
    return outcome.exit_code;
}
