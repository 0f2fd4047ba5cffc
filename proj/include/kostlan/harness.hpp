#pragma once

// Experiment configuration, recipes and result persistence for the command
// line tool. Every run writes <subcommand>.csv and <subcommand>_manifest.json
// into the output directory (overridden by the KOSTLAN_OUTPUT_DIR
// environment variable).

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace kostlan {

inline constexpr const char* kOutputDirEnv = "KOSTLAN_OUTPUT_DIR";

enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 2,
    kExitNumerical = 3,
};

struct ExperimentConfig {
    /// sample, roots, moments, kacrice, clt, lln, hole, concentration, partitions
    std::string subcommand = "moments";
    std::vector<int> degrees{100};
    std::int64_t n_samples = 1000;
    int p_max = 4;
    std::vector<std::string> phis{"one"};
    /// Mixed moment tuples, as indices into phis.
    std::vector<std::vector<int>> mixed;
    double window_a = 0.0;
    double window_b = 1.5707963267948966;
    std::uint64_t seed = 1;
    int workers = 1;
    std::string output_dir = "results";
    double epsilon = 0.5;
    /// kac_rice or empirical
    std::string sigma_source = "kac_rice";
    double root_tolerance = 1e-10;
    std::int64_t mc_draws = 100000;
    /// Separations at which the kacrice recipe tabulates R^2.
    std::vector<double> deltas;
    bool selftest = false;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Canonical JSON (sorted keys, every field present).
nlohmann::json to_json(const ExperimentConfig& c);
/// Rejects unknown keys and ill-typed values; missing keys keep defaults.
ExperimentConfig config_from_json(const nlohmann::json& j);
/// Accepts either a bare config or a run manifest (its "config" member).
ExperimentConfig load_config(const std::string& path);

/// Throws std::invalid_argument on inconsistent settings.
void validate(const ExperimentConfig& c);

struct RunOutcome {
    int exit_code = kExitOk;
    std::string csv_path;
    std::string manifest_path;
    std::string message;
};

/// Executes the recipe, writes the CSV and the manifest, and maps failures to
/// exit codes (2: invalid configuration, 3: numerical inconsistency).
RunOutcome run_experiment(ExperimentConfig config);

/// Version string baked in at build time (git describe).
std::string build_version();

struct SelfTestCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// The exact combinatorial property suite of the partitions module.
std::vector<SelfTestCheck> partitions_selftest(std::uint64_t seed);

/// RFC 4180 quoting when the field contains a comma, quote or newline.
std::string csv_field(const std::string& s);
/// %.17g.
std::string csv_number(double x);

}  // namespace kostlan
