// transport_lab: batch front-end for the norm, counterexample, solver and
// stability experiments. Writes <out>/<command>.json and CSV companions.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "translab/cli/config.hpp"
#include "translab/cli/runners.hpp"
#include "translab/errors.hpp"

namespace fs = std::filesystem;
using namespace translab::cli;

namespace {

struct Flags {
    std::string config;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    std::optional<double> gamma;
    std::string thetas;
    std::string grid;
    std::string profile;
};

void check_thread_env() {
    const char* env = std::getenv("TRANSPORT_LAB_THREADS");
    if (!env) return;
    const std::string s(env);
    const bool digits = !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
    if (!digits || std::stol(s) < 1) throw ConfigError("TRANSPORT_LAB_THREADS must be a positive integer");
}

ExperimentConfig resolve(const Flags& f) {
    ExperimentConfig c = f.config.empty() ? ExperimentConfig{} : load_config(f.config);
    if (f.seed) c.seed = *f.seed;
    if (f.gamma) c.counterexample.gamma = *f.gamma;
    if (!f.thetas.empty()) c.counterexample.thetas = parse_number_list(f.thetas);
    if (!f.profile.empty()) c.profile = f.profile;
    if (!f.grid.empty()) {
        // --grid applies to the solver and stability runs
        const GridSpec g = parse_grid(f.grid);
        c.solver.grid = g;
        c.stability.grid = g;
    }
    validate(c);
    return c;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + p.string() + "'");
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical experiments for transport equations with rough coefficients"};
    app.set_version_flag("--version", artifact_version());
    app.require_subcommand(1);

    Flags flags;
    app.add_option("--config", flags.config, "JSON experiment config")->check(CLI::ExistingFile);
    app.add_option("--out", flags.out, "output directory");
    app.add_option("--seed", flags.seed, "base seed");
    app.add_option("--gamma", flags.gamma, "exponent gamma in (1,2)");
    app.add_option("--thetas", flags.thetas, "comma-separated theta list");
    app.add_option("--grid", flags.grid, "nx,ny,nt for solver and stability runs");
    app.add_option("--profile", flags.profile, "bump profile")->check(CLI::IsMember({"exact", "demo"}));
    app.fallthrough();

    auto* norm = app.add_subcommand("norm", "Orlicz norms and the Holder/interpolation checks");
    auto* counter = app.add_subcommand("counterexample", "integrability and non-uniqueness of the rough field");
    auto* solver = app.add_subcommand("solver", "a-priori bounds, conservation, commutator and product checks");
    auto* stab = app.add_subcommand("stability", "comparator, quantitative bounds and perturbation ladder");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        check_thread_env();
        const ExperimentConfig config = resolve(flags);
        RunResult result;
        if (norm->parsed())
            result = run_norm(config);
        else if (counter->parsed())
            result = run_counterexample(config);
        else if (solver->parsed())
            result = run_solver(config);
        else if (stab->parsed())
            result = run_stability(config);

        fs::create_directories(flags.out);
        write_file(fs::path(flags.out) / (result.command + ".json"), result.record(config).dump(2) + "\n");
        // CSV readers should skip '#' lines; the header carries version and config
        const std::string stamp = "# transport_lab " + artifact_version() + " " + to_json(config).dump() + "\n";
        for (const auto& c : result.csv) write_file(fs::path(flags.out) / c.name, stamp + c.text);

        for (const auto& c : result.checks)
            std::cout << (c.ok ? "ok    " : "FAIL  ") << c.name << "  " << c.detail << '\n';
        return result.exit_code();
    } catch (const ConfigError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const translab::DomainError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvariant;
    }
}
