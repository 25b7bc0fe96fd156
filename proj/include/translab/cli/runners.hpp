#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "translab/cli/config.hpp"

namespace translab::cli {

// One named invariant with its verdict.
struct Check {
    std::string name;
    bool ok = false;
    std::string detail;
};

struct CsvFile {
    std::string name;  // file name inside the output directory
    std::string text;
};

struct RunResult {
    std::string command;
    std::vector<Check> checks;
    nlohmann::json results = nlohmann::json::object();
    std::vector<CsvFile> csv;

    int exit_code() const;
    // schema_version, version, command, resolved config, checks, results.
    nlohmann::json record(const ExperimentConfig& config) const;
};

std::string artifact_version();

// Indicator norms against the closed form and the Holder/interpolation checks.
// CSV: space,c,measure,bisection,closed_form,rel_err
RunResult run_norm(const ExperimentConfig& config);

// Integrability of the rough divergence and the non-uniqueness report.
// CSV: theta_i,theta_j,distance,distance_error
RunResult run_counterexample(const ExperimentConfig& config);

// A-priori margins, conservation, commutator ladders, product defects.
// CSV: suite,case,quantity,value
RunResult run_solver(const ExperimentConfig& config);

// Comparator identity, quantitative bounds, perturbation ladder.
// CSV: t,alpha,alpha_star,beta (first quantitative run)
RunResult run_stability(const ExperimentConfig& config);

}  // namespace translab::cli
