#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace translab::cli {

inline constexpr int kSchemaVersion = 1;

// Exit codes: every check passed, an invariant failed, bad usage or config.
enum ExitCode : int { kExitOk = 0, kExitInvariant = 1, kExitUsage = 2 };

// Bad flags, unknown fields, out-of-range parameters. Maps to kExitUsage.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GridSpec {
    int nx = 0;
    int ny = 0;
    int nt = 0;
};

struct IndicatorCase {
    double c = 3.0;
    double measure = 1.0;
};

struct NormConfig {
    std::vector<std::string> spaces{"exp_l", "exp_l_over_log_l", "l_log_l_loglog_l"};
    std::vector<IndicatorCase> indicators{{3.0, 1.0}};
    int random_indicators = 50;
    int indicator_nodes = 2001;
    int inequality_functions = 100;
    int inequality_nodes = 257;
    double norm_tolerance = 1e-9;       // relative, bisection vs closed form
    double quadrature_tolerance = 1e-8; // relative slack on the inequalities
    // Multiplies the interpolation bound before comparing; values below 1
    // deliberately corrupt the oracle.
    double oracle_scale = 1.0;
};

struct CounterexampleConfig {
    double gamma = 1.5;
    std::vector<double> thetas{0.0, 0.5, 1.0};
    double demo_decay = 0.5;
    int k_max = 10;
    int k_max_coarse = 8;
    int product_k_max = 6;
    int product_samples = 200;
    double stability_tolerance = 1e-3;
    int battery = 20;
    int distance_nodes = 801;
    double residual_tolerance = 1e-4;
    double flow_tolerance = 1e-5;
    int flow_samples = 150;
};

struct SolverConfig {
    std::vector<std::string> suites{"apriori", "conservation", "commutator", "product"};
    GridSpec grid{96, 96, 10};
    double T = 0.5;
    int seeds = 5;
    int substeps = 4;
    double margin_tolerance = 1e-6;
    GridSpec conservation_grid{256, 256, 100};
    double conservation_tolerance = 1e-6;
    int commutator_nodes = 192;
    std::vector<double> commutator_ladder{0.064, 0.032, 0.016};
    std::vector<double> demo_ladder{0.032, 0.016, 0.008};
    int product_nodes = 256;
    int product_seeds = 2;
    double product_tolerance = 1e-5;
};

struct StabilityConfig {
    GridSpec grid{129, 129, 10};
    double T = 0.1;
    double p = 2.0;
    int seeds = 3;
    double amplitude = 1e-80;
    double margin_tolerance = 1e-3;
    int rungs = 5;
    double rung_amplitude = 1e-7;
    std::vector<int> comparator_steps{1000, 2000, 4000};
    double comparator_epsilon = 1e-20;
};

struct ExperimentConfig {
    int schema_version = kSchemaVersion;
    std::uint64_t seed = 1;
    std::string profile = "demo";  // exact | demo, for runs touching the rough field
    NormConfig norm;
    CounterexampleConfig counterexample;
    SolverConfig solver;
    StabilityConfig stability;
};

// Parses a config document. Missing fields keep their defaults; unknown
// fields, a wrong schema_version and invalid values raise ConfigError.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

// Every field, defaults included.
nlohmann::json to_json(const ExperimentConfig& c);

// Range checks shared by the file and flag paths.
void validate(const ExperimentConfig& c);

// "a,b,c" helpers for the flag overrides.
std::vector<double> parse_number_list(const std::string& text);
GridSpec parse_grid(const std::string& text);

}  // namespace translab::cli
