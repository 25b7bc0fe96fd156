#include <gtest/gtest.h>

#include <cmath>

#include "translab/cli/config.hpp"
#include "translab/cli/families.hpp"
#include "translab/cli/runners.hpp"

using namespace translab;
using namespace translab::cli;
using nlohmann::json;

namespace {

ExperimentConfig small_norm_config() {
    ExperimentConfig c;
    c.norm.spaces = {"exp_l"};
    c.norm.random_indicators = 3;
    c.norm.inequality_functions = 5;
    return c;
}

}  // namespace

TEST(Config, DefaultsRoundTrip) {
    ExperimentConfig c;
    json j = to_json(c);
    EXPECT_EQ(j["schema_version"], kSchemaVersion);
    EXPECT_EQ(to_json(parse_config(j)), j);
}

TEST(Config, UnknownFieldsAreRejected) {
    EXPECT_THROW(parse_config(json{{"colour", 1}}), ConfigError);
    EXPECT_THROW(parse_config(json{{"solver", {{"grid", {{"nz", 3}}}}}}), ConfigError);
    EXPECT_THROW(parse_config(json{{"norm", {{"indicators", {{{"c", 1}, {"mass", 2}}}}}}}), ConfigError);
}

TEST(Config, RangeAndTypeErrors) {
    EXPECT_THROW(parse_config(json{{"schema_version", 2}}), ConfigError);
    EXPECT_THROW(parse_config(json{{"counterexample", {{"gamma", 0.5}}}}), ConfigError);
    EXPECT_THROW(parse_config(json{{"counterexample", {{"thetas", {0.0}}}}}), ConfigError);
    EXPECT_THROW(parse_config(json{{"profile", "smooth"}}), ConfigError);
    EXPECT_THROW(parse_config(json{{"seed", "seven"}}), ConfigError);
    EXPECT_NO_THROW(parse_config(json{{"counterexample", {{"gamma", 1.9}}}}));
}

TEST(Config, FlagLists) {
    EXPECT_EQ(parse_number_list("0,0.5,1"), (std::vector<double>{0.0, 0.5, 1.0}));
    EXPECT_THROW(parse_number_list("0,x"), ConfigError);
    GridSpec g = parse_grid("64,32,5");
    EXPECT_EQ(g.nx, 64);
    EXPECT_EQ(g.ny, 32);
    EXPECT_EQ(g.nt, 5);
    EXPECT_THROW(parse_grid("64,32"), ConfigError);
    EXPECT_THROW(parse_grid("64,32,2.5"), ConfigError);
}

TEST(Norm, DocumentedIndicatorValue) {
    RunResult r = run_norm(small_norm_config());
    EXPECT_EQ(r.exit_code(), kExitOk);
    const json& first = r.results["indicator_norms"][0];
    EXPECT_NEAR(first["bisection"].get<double>(), 4.328085, 1e-6);
    EXPECT_NEAR(first["closed_form"].get<double>(), 3.0 / std::log(2.0), 1e-12);
}

TEST(Norm, ZeroFunctionHasZeroNorm) {
    ExperimentConfig c = small_norm_config();
    c.norm.indicators = {{0.0, 1.0}};
    RunResult r = run_norm(c);
    EXPECT_EQ(r.results["indicator_norms"][0]["bisection"].get<double>(), 0.0);
    EXPECT_EQ(r.results["indicator_norms"][0]["closed_form"].get<double>(), 0.0);
    EXPECT_EQ(r.exit_code(), kExitOk);
}

TEST(Norm, CorruptedOracleFailsTheNamedInvariant) {
    ExperimentConfig c = small_norm_config();
    c.norm.oracle_scale = 1e-3;
    RunResult r = run_norm(c);
    EXPECT_EQ(r.exit_code(), kExitInvariant);
    bool named = false;
    for (const auto& ch : r.checks) named = named || (ch.name == "zygmund_interpolation_bound" && !ch.ok);
    EXPECT_TRUE(named);
}

TEST(Record, IdenticalRunsGiveIdenticalBytes) {
    ExperimentConfig c = small_norm_config();
    RunResult a = run_norm(c), b = run_norm(c);
    EXPECT_EQ(a.record(c).dump(2), b.record(c).dump(2));
    EXPECT_EQ(a.csv[0].text, b.csv[0].text);
    json rec = a.record(c);
    EXPECT_EQ(rec["version"], artifact_version());
    EXPECT_EQ(rec["config"], to_json(c));
}

TEST(Solver, ReversedCommutatorLadderFails) {
    ExperimentConfig c;
    c.solver.suites = {"commutator"};
    c.solver.commutator_nodes = 128;
    c.solver.commutator_ladder = {0.032, 0.064, 0.128};
    c.solver.demo_ladder = {0.024, 0.016, 0.012};
    validate(c);
    RunResult r = run_solver(c);
    EXPECT_EQ(r.exit_code(), kExitInvariant);
    for (const auto& ch : r.checks)
        if (ch.name == "commutator_decay_smooth" || ch.name == "commutator_decay_kink") EXPECT_FALSE(ch.ok);
}

TEST(Families, SplitsAddUpToTheDivergence) {
    const double h = 1e-6;
    auto check = [h](const TransportProblem& p, double t, Vec2 x) {
        const double div = (p.b(t, {x.x + h, x.y}).x - p.b(t, {x.x - h, x.y}).x) / (2 * h) +
                           (p.b(t, {x.x, x.y + h}).y - p.b(t, {x.x, x.y - h}).y) / (2 * h);
        EXPECT_NEAR(div, p.B1(t, x) + p.B2(t, x), 1e-7);
    };
    for (std::uint64_t s : {1u, 2u, 3u}) {
        check(smooth_problem(s, 16, 16, 1.0), 0.3, {0.31, 0.77});
        check(log_singular_problem(s, 16, 16, 0.1, 1.0), 0.0, {0.2, 0.6});
    }
    check(divergence_free_split_problem(16, 16, 0.1, 1.0), 0.0, {0.4, 0.1});
}

TEST(Families, RotationIsRigidInTheCore) {
    Vec2 v = compact_rotation(0.0, {0.6, 0.5});
    EXPECT_NEAR(v.y, 2.0 * M_PI * 0.1, 1e-15);
    EXPECT_EQ(compact_rotation(0.0, {0.01, 0.01}).x, 0.0);
}
