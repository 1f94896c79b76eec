#include "conflab/config.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include "conflab/appendix_a.hpp"
#include "conflab/appendix_b.hpp"
#include "conflab/errors.hpp"

namespace conflab {

namespace {

template <class T>
T get_or(const Json& j, const char* key, T fallback, const std::string& path) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception&) {
        throw ConfigError(path + key, "has the wrong type");
    }
}

const Json& require(const Json& j, const char* key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) throw ConfigError(path + key, "is required");
    return j.at(key);
}

std::string require_string(const Json& j, const char* key, const std::string& path) {
    const Json& v = require(j, key, path);
    if (!v.is_string()) throw ConfigError(path + key, "must be a string");
    return v.get<std::string>();
}

double require_number(const Json& j, const char* key, const std::string& path) {
    const Json& v = require(j, key, path);
    if (!v.is_number()) throw ConfigError(path + key, "must be a number");
    return v.get<double>();
}

PrecisionMode parse_precision(const std::string& s, const std::string& field) {
    if (s == "float") return PrecisionMode::floating;
    if (s == "exact") return PrecisionMode::exact;
    throw ConfigError(field, "must be \"float\" or \"exact\"");
}

PotentialPtr potential_at(const Json& node, const DynSystem& s, PrecisionMode mode, const std::string& path) {
    if (!node.is_object()) throw ConfigError(path.empty() ? "potential" : path, "must be an object");
    const std::string p = path.empty() ? "potential." : path + ".";
    const std::string kind = require_string(node, "kind", p);
    if (kind == "constant") return Potential::constant(require_number(node, "value", p));
    if (kind == "trig") {
        const Json& terms = require(node, "terms", p);
        if (!terms.is_array() || terms.empty()) throw ConfigError(p + "terms", "must be a nonempty array");
        TrigPoly poly;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const std::string tp = p + "terms[" + std::to_string(i) + "].";
            int n = get_or<int>(terms[i], "n", -1, tp);
            if (n < 0) throw ConfigError(tp + "n", "must be a nonnegative integer");
            poly = poly + TrigPoly::cos_sin(n, get_or<double>(terms[i], "cos", 0.0, tp), get_or<double>(terms[i], "sin", 0.0, tp));
        }
        return Potential::trig(poly);
    }
    if (kind == "polynomial" || kind == "table") {
        const char* key = kind == "table" ? "values" : "coefficients";
        const Json& v = require(node, key, p);
        if (!v.is_array() || v.empty()) throw ConfigError(p + key, "must be a nonempty array of numbers");
        std::vector<double> xs;
        for (const auto& e : v) {
            if (!e.is_number()) throw ConfigError(p + key, "must contain numbers only");
            xs.push_back(e.get<double>());
        }
        if (kind == "table") {
            if (!s.is_finite() || s.period() != static_cast<int>(xs.size()))
                throw ConfigError(p + key, "must have one value per point of the finite cycle");
            return Potential::table(xs);
        }
        return Potential::polynomial(xs);
    }
    if (kind == "coboundary") return Potential::coboundary(potential_at(require(node, "transfer", p), s, mode, p + "transfer"), s);
    if (kind == "negated") return Potential::negated(potential_at(require(node, "potential", p), s, mode, p + "potential"));
    if (kind == "sum") {
        const Json& terms = require(node, "terms", p);
        if (!terms.is_array() || terms.empty()) throw ConfigError(p + "terms", "must be a nonempty array");
        std::vector<std::pair<double, PotentialPtr>> out;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const std::string tp = p + "terms[" + std::to_string(i) + "]";
            out.push_back({get_or<double>(terms[i], "weight", 1.0, tp + "."),
                           potential_at(require(terms[i], "potential", tp + "."), s, mode, tp + ".potential")});
        }
        return Potential::sum(std::move(out));
    }
    if (kind == "appendix_a") {
        if (!s.is_rotation()) throw ConfigError(p + "kind", "appendix_a needs a rotation system");
        AppendixAOptions o;
        o.depth = get_or<int>(node, "depth", o.depth, p);
        o.onset = get_or<double>(node, "onset", o.onset, p);
        o.horizon = get_or<std::int64_t>(node, "validation_horizon", o.horizon, p);
        std::vector<double> pts = get_or<std::vector<double>>(node, "points", {0.0, 0.5}, p);
        std::vector<SpectrumTarget> targets;
        if (node.contains("targets")) {
            const Json& t = node.at("targets");
            if (!t.is_array()) throw ConfigError(p + "targets", "must be an array");
            for (std::size_t i = 0; i < t.size(); ++i) {
                const std::string tp = p + "targets[" + std::to_string(i) + "].";
                targets.push_back({require_number(t[i], "beta", tp), get_or<bool>(t[i], "closed", true, tp)});
            }
        } else {
            targets = {{-1.0, true}, {-0.5, false}};
        }
        if (targets.size() != pts.size()) throw ConfigError(p + "targets", "must have one entry per point");
        return Potential::appendix_a(AppendixAPotential::build(s, pts, targets, o));
    }
    if (kind == "appendix_b") {
        const ContinuedFraction* cf = s.continued_fraction();
        if (!s.is_rotation() || !cf) throw ConfigError(p + "kind", "appendix_b needs a rotation system");
        int K = get_or<int>(node, "K", 2, p);
        std::size_t grid = get_or<std::size_t>(node, "certificate_grid", 10000, p);
        return Potential::appendix_b(AppendixBPotential::build(*cf, K, mode, grid));
    }
    throw ConfigError(p + "kind", "unknown potential kind \"" + kind + "\"");
}

std::vector<double> parse_beta_grid(const Json& b) {
    std::vector<double> out;
    if (b.is_object() && b.contains("values")) {
        for (const auto& v : b.at("values")) {
            if (!v.is_number()) throw ConfigError("beta.values", "must contain numbers only");
            out.push_back(v.get<double>());
        }
    } else if (b.is_object()) {
        double lo = require_number(b, "min", "beta."), hi = require_number(b, "max", "beta.");
        int steps = get_or<int>(b, "steps", 0, "beta.");
        if (steps < 1) throw ConfigError("beta.steps", "must be a positive integer");
        if (hi < lo) throw ConfigError("beta.max", "must not be below beta.min");
        for (int i = 0; i < steps; ++i) {
            double v = steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
            // snap to a 1e-12 lattice so the grid is exactly symmetric
            v = std::round(v * 1e12) / 1e12;
            out.push_back(v == 0.0 ? 0.0 : v);
        }
    } else {
        throw ConfigError("beta", "must be an object with min/max/steps or values");
    }
    if (out.empty()) throw ConfigError("beta", "grid must be nonempty");
    return out;
}

}  // namespace

const char* to_string(PrecisionMode m) noexcept { return m == PrecisionMode::exact ? "exact" : "float"; }

RunConfig parse_config(const Json& j, const std::string& command) {
    if (!j.is_object()) throw ConfigError("<root>", "config must be a JSON object");
    RunConfig c;
    c.command = command.empty() ? get_or<std::string>(j, "command", "", "") : command;
    static const std::vector<std::string> commands{"spectrum", "construct", "classify", "gibbs", "potential-build", "flow-props"};
    if (std::find(commands.begin(), commands.end(), c.command) == commands.end())
        throw ConfigError("command", "unknown command \"" + c.command + "\"");
    c.system = require(j, "system", "");
    c.potential = require(j, "potential", "");
    if (c.command == "spectrum") {
        c.beta_grid = parse_beta_grid(require(j, "beta", ""));
        if (std::find(c.beta_grid.begin(), c.beta_grid.end(), 0.0) == c.beta_grid.end())
            throw ConfigError("beta", "spectrum grids must contain 0");
    } else if (j.contains("beta")) {
        if (!j.at("beta").is_number()) throw ConfigError("beta", "must be a number for this command");
        c.beta = j.at("beta").get<double>();
    }
    c.horizon = get_or<std::int64_t>(j, "horizon", c.horizon, "");
    c.max_horizon = get_or<std::int64_t>(j, "max_horizon", c.horizon, "");
    c.tolerance = get_or<double>(j, "tolerance", c.tolerance, "");
    c.ratio_tol = get_or<double>(j, "ratio_tol", c.ratio_tol, "");
    c.grid = get_or<std::size_t>(j, "grid", c.grid, "");
    c.pairs = get_or<int>(j, "pairs", c.pairs, "");
    c.n_list = get_or<std::vector<std::int64_t>>(j, "n_list", c.n_list, "");
    c.seeds = j.contains("seeds") ? j.at("seeds") : Json{{"random", 2}};
    c.point = j.contains("point") ? j.at("point") : Json(nullptr);
    c.precision = parse_precision(get_or<std::string>(j, "precision", "float", ""), "precision");
    if (j.contains("output")) c.out_dir = get_or<std::string>(j.at("output"), "dir", c.out_dir, "output.");
    c.seed = get_or<std::uint64_t>(j, "seed", c.seed, "");

    if (c.horizon < 1000) throw ConfigError("horizon", "must be at least 1000");
    if (c.max_horizon < 1) throw ConfigError("max_horizon", "must be positive");
    if (!(c.tolerance > 0)) throw ConfigError("tolerance", "must be positive");
    if (!(c.ratio_tol > 0)) throw ConfigError("ratio_tol", "must be positive");
    if (c.grid == 0) throw ConfigError("grid", "must be positive");
    if (c.pairs < 1) throw ConfigError("pairs", "must be positive");
    if (c.n_list.empty()) throw ConfigError("n_list", "must be nonempty");
    return c;
}

RunConfig load_config(const std::string& path, const std::string& command) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot open " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError("--config", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(j, command);
}

Json to_json(const RunConfig& c) {
    Json j;
    j["command"] = c.command;
    j["system"] = c.system;
    j["potential"] = c.potential;
    if (c.command == "spectrum")
        j["beta_grid"] = c.beta_grid;
    else
        j["beta"] = c.beta;
    j["horizon"] = c.horizon;
    j["max_horizon"] = c.max_horizon;
    j["tolerance"] = c.tolerance;
    j["ratio_tol"] = c.ratio_tol;
    j["grid"] = c.grid;
    j["seeds"] = c.seeds;
    j["point"] = c.point;
    j["n_list"] = c.n_list;
    j["pairs"] = c.pairs;
    j["precision"] = to_string(c.precision);
    j["seed"] = c.seed;
    return j;
}

DynSystem make_system(const Json& node) {
    if (!node.is_object()) throw ConfigError("system", "must be an object");
    const std::string kind = require_string(node, "kind", "system.");
    auto alpha = [&]() {
        std::string name = get_or<std::string>(node, "alpha", "golden", "system.");
        try {
            return ContinuedFraction::named(name);
        } catch (const Error& e) {
            throw ConfigError("system.alpha", e.what());
        }
    };
    if (kind == "rotation") return DynSystem::rotation(alpha());
    if (kind == "finite_cycle") {
        int p = get_or<int>(node, "period", 0, "system.");
        if (p < 1) throw ConfigError("system.period", "must be a positive integer");
        return DynSystem::finite_cycle(p);
    }
    if (kind == "squaring") return DynSystem::squaring_map();
    if (kind == "sine_conjugated_rotation") {
        double delta = get_or<double>(node, "delta", 0.3, "system.");
        if (!(std::abs(delta) < 1)) throw ConfigError("system.delta", "must satisfy |delta| < 1");
        return DynSystem::sine_conjugated_rotation(alpha(), delta);
    }
    throw ConfigError("system.kind", "unknown system kind \"" + kind + "\"");
}

PotentialPtr make_potential(const Json& node, const DynSystem& s, PrecisionMode mode) { return potential_at(node, s, mode, ""); }

Point make_point(const Json& node, const DynSystem& s) {
    if (!node.is_number()) throw ConfigError("point", "must be a number (coordinate, or index on a finite cycle)");
    Point x;
    switch (s.space()) {
        case SpaceKind::finite: {
            if (!node.is_number_integer()) throw ConfigError("point", "must be an integer index on a finite cycle");
            x = finite_point(node.get<int>());
            break;
        }
        case SpaceKind::interval: x = interval_point(node.get<double>()); break;
        default: x = circle_point(node.get<double>()); break;
    }
    if (!s.contains(x)) throw ConfigError("point", "is not in the phase space of " + s.name());
    return x;
}

std::vector<Point> make_seeds(const RunConfig& c, const DynSystem& s) {
    std::vector<Point> out;
    if (c.seeds.is_array()) {
        for (std::size_t i = 0; i < c.seeds.size(); ++i) {
            try {
                out.push_back(make_point(c.seeds[i], s));
            } catch (const ConfigError& e) {
                throw ConfigError("seeds[" + std::to_string(i) + "]", e.what());
            }
        }
    } else if (c.seeds.is_object() && c.seeds.contains("random")) {
        int n = get_or<int>(c.seeds, "random", 0, "seeds.");
        if (n < 1) throw ConfigError("seeds.random", "must be a positive integer");
        std::mt19937_64 rng(c.seed);
        for (int i = 0; i < n; ++i) {
            double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            if (s.is_finite())
                out.push_back(finite_point(1 + static_cast<int>(u * s.period())));
            else if (s.space() == SpaceKind::interval)
                out.push_back(interval_point(u));
            else
                out.push_back(circle_point(u));
        }
    } else {
        throw ConfigError("seeds", "must be an array or {\"random\": n}");
    }
    if (out.empty()) throw ConfigError("seeds", "must be nonempty");
    return out;
}

}  // namespace conflab

namespace conflab {

void apply_precision_override(RunConfig& c, const char* env_value) {
    if (env_value && *env_value) c.precision = parse_precision(env_value, "CONFLAB_PRECISION");
}

}  // namespace conflab
