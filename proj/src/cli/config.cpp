#include "translab/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace translab::cli {

using nlohmann::json;

namespace {

// Reads known keys out of one object and rejects whatever is left over.
class Block {
public:
    Block(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) throw ConfigError("'" + where_ + "' must be an object");
    }

    template <class T>
    void get(const char* key, T& out) {
        seen_.insert(key);
        auto it = j_.find(key);
        if (it == j_.end()) return;
        try {
            out = it->template get<T>();
        } catch (const json::exception&) {
            throw ConfigError("field '" + where_ + "." + key + "' has the wrong type");
        }
    }

    const json* child(const char* key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError("unknown field '" + where_ + "." + it.key() + "'");
    }

private:
    const json& j_;
    std::string where_;
    std::set<std::string> seen_;
};

void read_grid(Block& b, const char* key, GridSpec& g, const std::string& where) {
    if (const json* c = b.child(key)) {
        Block gb(*c, where + "." + key);
        gb.get("nx", g.nx);
        gb.get("ny", g.ny);
        gb.get("nt", g.nt);
        gb.finish();
    }
}

json grid_json(const GridSpec& g) { return {{"nx", g.nx}, {"ny", g.ny}, {"nt", g.nt}}; }

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

bool known_space(const std::string& s) {
    return s == "exp_l" || s == "exp_l_over_log_l" || s == "l_log_l_loglog_l";
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
    ExperimentConfig c;
    Block root(j, "config");
    root.get("schema_version", c.schema_version);
    if (c.schema_version != kSchemaVersion)
        throw ConfigError("schema_version " + std::to_string(c.schema_version) + " is not supported (expected " +
                          std::to_string(kSchemaVersion) + ")");
    root.get("seed", c.seed);
    root.get("profile", c.profile);

    if (const json* n = root.child("norm")) {
        Block b(*n, "norm");
        b.get("spaces", c.norm.spaces);
        if (const json* ind = b.child("indicators")) {
            if (!ind->is_array()) throw ConfigError("'norm.indicators' must be an array");
            c.norm.indicators.clear();
            for (const auto& e : *ind) {
                IndicatorCase ic;
                Block ib(e, "norm.indicators[]");
                ib.get("c", ic.c);
                ib.get("measure", ic.measure);
                ib.finish();
                c.norm.indicators.push_back(ic);
            }
        }
        b.get("random_indicators", c.norm.random_indicators);
        b.get("indicator_nodes", c.norm.indicator_nodes);
        b.get("inequality_functions", c.norm.inequality_functions);
        b.get("inequality_nodes", c.norm.inequality_nodes);
        b.get("norm_tolerance", c.norm.norm_tolerance);
        b.get("quadrature_tolerance", c.norm.quadrature_tolerance);
        b.get("oracle_scale", c.norm.oracle_scale);
        b.finish();
    }
    if (const json* n = root.child("counterexample")) {
        auto& x = c.counterexample;
        Block b(*n, "counterexample");
        b.get("gamma", x.gamma);
        b.get("thetas", x.thetas);
        b.get("demo_decay", x.demo_decay);
        b.get("k_max", x.k_max);
        b.get("k_max_coarse", x.k_max_coarse);
        b.get("product_k_max", x.product_k_max);
        b.get("product_samples", x.product_samples);
        b.get("stability_tolerance", x.stability_tolerance);
        b.get("battery", x.battery);
        b.get("distance_nodes", x.distance_nodes);
        b.get("residual_tolerance", x.residual_tolerance);
        b.get("flow_tolerance", x.flow_tolerance);
        b.get("flow_samples", x.flow_samples);
        b.finish();
    }
    if (const json* n = root.child("solver")) {
        auto& s = c.solver;
        Block b(*n, "solver");
        b.get("suites", s.suites);
        read_grid(b, "grid", s.grid, "solver");
        b.get("T", s.T);
        b.get("seeds", s.seeds);
        b.get("substeps", s.substeps);
        b.get("margin_tolerance", s.margin_tolerance);
        read_grid(b, "conservation_grid", s.conservation_grid, "solver");
        b.get("conservation_tolerance", s.conservation_tolerance);
        b.get("commutator_nodes", s.commutator_nodes);
        b.get("commutator_ladder", s.commutator_ladder);
        b.get("demo_ladder", s.demo_ladder);
        b.get("product_nodes", s.product_nodes);
        b.get("product_seeds", s.product_seeds);
        b.get("product_tolerance", s.product_tolerance);
        b.finish();
    }
    if (const json* n = root.child("stability")) {
        auto& s = c.stability;
        Block b(*n, "stability");
        read_grid(b, "grid", s.grid, "stability");
        b.get("T", s.T);
        b.get("p", s.p);
        b.get("seeds", s.seeds);
        b.get("amplitude", s.amplitude);
        b.get("margin_tolerance", s.margin_tolerance);
        b.get("rungs", s.rungs);
        b.get("rung_amplitude", s.rung_amplitude);
        b.get("comparator_steps", s.comparator_steps);
        b.get("comparator_epsilon", s.comparator_epsilon);
        b.finish();
    }
    root.finish();
    validate(c);
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

json to_json(const ExperimentConfig& c) {
    json ind = json::array();
    for (const auto& i : c.norm.indicators) ind.push_back({{"c", i.c}, {"measure", i.measure}});
    const auto& x = c.counterexample;
    const auto& s = c.solver;
    const auto& t = c.stability;
    return {
        {"schema_version", c.schema_version},
        {"seed", c.seed},
        {"profile", c.profile},
        {"norm",
         {{"spaces", c.norm.spaces},
          {"indicators", ind},
          {"random_indicators", c.norm.random_indicators},
          {"indicator_nodes", c.norm.indicator_nodes},
          {"inequality_functions", c.norm.inequality_functions},
          {"inequality_nodes", c.norm.inequality_nodes},
          {"norm_tolerance", c.norm.norm_tolerance},
          {"quadrature_tolerance", c.norm.quadrature_tolerance},
          {"oracle_scale", c.norm.oracle_scale}}},
        {"counterexample",
         {{"gamma", x.gamma},
          {"thetas", x.thetas},
          {"demo_decay", x.demo_decay},
          {"k_max", x.k_max},
          {"k_max_coarse", x.k_max_coarse},
          {"product_k_max", x.product_k_max},
          {"product_samples", x.product_samples},
          {"stability_tolerance", x.stability_tolerance},
          {"battery", x.battery},
          {"distance_nodes", x.distance_nodes},
          {"residual_tolerance", x.residual_tolerance},
          {"flow_tolerance", x.flow_tolerance},
          {"flow_samples", x.flow_samples}}},
        {"solver",
         {{"suites", s.suites},
          {"grid", grid_json(s.grid)},
          {"T", s.T},
          {"seeds", s.seeds},
          {"substeps", s.substeps},
          {"margin_tolerance", s.margin_tolerance},
          {"conservation_grid", grid_json(s.conservation_grid)},
          {"conservation_tolerance", s.conservation_tolerance},
          {"commutator_nodes", s.commutator_nodes},
          {"commutator_ladder", s.commutator_ladder},
          {"demo_ladder", s.demo_ladder},
          {"product_nodes", s.product_nodes},
          {"product_seeds", s.product_seeds},
          {"product_tolerance", s.product_tolerance}}},
        {"stability",
         {{"grid", grid_json(t.grid)},
          {"T", t.T},
          {"p", t.p},
          {"seeds", t.seeds},
          {"amplitude", t.amplitude},
          {"margin_tolerance", t.margin_tolerance},
          {"rungs", t.rungs},
          {"rung_amplitude", t.rung_amplitude},
          {"comparator_steps", t.comparator_steps},
          {"comparator_epsilon", t.comparator_epsilon}}},
    };
}

void validate(const ExperimentConfig& c) {
    require(c.profile == "exact" || c.profile == "demo", "profile must be 'exact' or 'demo'");

    const auto& n = c.norm;
    for (const auto& s : n.spaces) require(known_space(s), "unknown space '" + s + "'");
    for (const auto& i : n.indicators)
        require(i.c >= 0.0 && std::isfinite(i.c) && i.measure > 0.0 && std::isfinite(i.measure),
                "indicator needs c >= 0 and measure > 0");
    require(n.random_indicators >= 0 && n.inequality_functions >= 0, "counts must be nonnegative");
    require(n.indicator_nodes >= 3 && n.inequality_nodes >= 3, "node counts must be at least 3");
    require(n.norm_tolerance > 0.0 && n.quadrature_tolerance >= 0.0, "tolerances must be positive");
    require(n.oracle_scale > 0.0, "oracle_scale must be positive");

    const auto& x = c.counterexample;
    require(x.gamma > 1.0 && x.gamma < 2.0, "gamma must lie in (1, 2)");
    require(x.thetas.size() >= 2, "at least two thetas are needed");
    for (double t : x.thetas) require(t >= 0.0 && std::isfinite(t), "thetas must be finite and nonnegative");
    require(x.demo_decay > 0.0 && x.demo_decay < 1.0, "demo_decay must lie in (0, 1)");
    require(x.k_max >= 1 && x.k_max_coarse >= 1 && x.k_max_coarse < x.k_max, "need 1 <= k_max_coarse < k_max");
    require(x.product_k_max >= 1 && x.product_samples >= 1, "product sampling must be positive");
    require(x.battery >= 1 && x.distance_nodes >= 11 && x.flow_samples >= 1, "battery and grids must be positive");

    const auto& s = c.solver;
    const std::set<std::string> suites{"apriori", "conservation", "commutator", "product"};
    for (const auto& name : s.suites) require(suites.count(name) > 0, "unknown solver suite '" + name + "'");
    require(s.grid.nx >= 16 && s.grid.ny >= 16 && s.grid.nt >= 1, "solver grid too small");
    require(s.conservation_grid.nx >= 16 && s.conservation_grid.ny >= 16 && s.conservation_grid.nt >= 1,
            "conservation grid too small");
    require(s.T > 0.0 && s.seeds >= 0 && s.substeps >= 1, "solver needs T > 0, seeds >= 0, substeps >= 1");
    require(s.commutator_ladder.size() >= 2 && s.demo_ladder.size() >= 2, "ladders need at least two rungs");
    for (double e : s.commutator_ladder) require(e > 0.0 && e < 0.25, "commutator radii must lie in (0, 0.25)");
    for (double e : s.demo_ladder) require(e > 0.0 && e < 0.05, "demo radii must lie in (0, 0.05)");
    require(s.commutator_nodes >= 32 && s.product_nodes >= 32 && s.product_seeds >= 0, "grids too small");

    const auto& t = c.stability;
    require(t.grid.nx >= 16 && t.grid.ny >= 16 && t.grid.nt >= 1, "stability grid too small");
    require(t.T > 0.0 && t.p >= 1.0 && std::isfinite(t.p), "stability needs T > 0 and p in [1, inf)");
    require(t.seeds >= 0 && t.rungs >= 1, "stability counts must be positive");
    require(t.amplitude > 0.0 && t.rung_amplitude > 0.0, "amplitudes must be positive");
    require(t.comparator_steps.size() >= 2, "comparator ladder needs at least two rungs");
    for (int k : t.comparator_steps) require(k >= 2, "comparator steps must be at least 2");
    require(t.comparator_epsilon > 0.0 && t.comparator_epsilon < 1e-7, "comparator_epsilon must lie in (0, 1e-7)");
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("'" + item + "' is not a number");
        }
    }
    if (out.empty()) throw ConfigError("empty list");
    return out;
}

GridSpec parse_grid(const std::string& text) {
    std::vector<double> v = parse_number_list(text);
    if (v.size() != 3) throw ConfigError("--grid expects nx,ny,nt");
    for (double d : v)
        if (d != std::floor(d) || d < 1.0 || d > 1e5) throw ConfigError("--grid entries must be positive integers");
    return {static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2])};
}

}  // namespace translab::cli
