#include "conflab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "conflab/errors.hpp"

namespace conflab {

Json num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return round_significant(v, 12);
}

namespace {

std::string csv_num(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

Json fit_json(const LineFit& f) {
    return Json{{"slope", num(f.slope)}, {"intercept", num(f.intercept)}, {"slope_stderr", num(f.slope_stderr)}, {"points", f.points}};
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    return out;
}

}  // namespace

Json to_json(const CesaroStats& c, bool with_averages) {
    Json j{{"side", c.side == Direction::forward ? "forward" : "backward"}, {"horizon", c.horizon}, {"beta", num(c.beta)},
           {"tail_max", num(c.tail_max)}};
    if (with_averages) {
        Json a = Json::array();
        for (double v : c.averages) a.push_back(num(v));
        j["averages"] = a;
    }
    return j;
}

Json to_json(const ExistenceResult& r) {
    Json hist = Json::array();
    for (const auto& h : r.history)
        hist.push_back({{"horizon", h.horizon}, {"tail_max_forward", num(h.forward)}, {"tail_max_backward", num(h.backward)}});
    return Json{{"verdict", to_string(r.verdict)}, {"beta", num(r.beta)}, {"tol", num(r.tol)}, {"history", hist}};
}

Json to_json(const SpectrumVerdict& v) {
    Json ev = Json::array();
    for (const auto& e : v.evidence)
        ev.push_back({{"beta", num(e.beta)},
                      {"verdict", to_string(e.verdict)},
                      {"tail_max_forward", num(e.tail_max_forward)},
                      {"tail_max_backward", num(e.tail_max_backward)},
                      {"horizon", e.horizon},
                      {"seed", e.seed}});
    Json j{{"classification", to_string(v.classification)},
           {"mismatch", num(v.mismatch)},
           {"horizon", v.horizon},
           {"tol", num(v.tol)},
           {"minimal", v.minimal},
           {"invariant_mean", v.invariant_mean ? num(*v.invariant_mean) : Json(nullptr)},
           {"notes", v.notes},
           {"evidence", ev}};
    return j;
}

Json to_json(const std::vector<Residual>& r) {
    Json j = Json::object();
    for (const auto& x : r) j[x.test] = num(x.value);
    return j;
}

Json to_json(const ConformalReport& r) {
    Json sched = Json::array();
    auto step = [](const WindowStep& s) {
        return Json{{"horizon", s.horizon}, {"n", s.n}, {"m", s.m}, {"ratio", num(s.ratio)}, {"method", s.method}};
    };
    for (const auto& s : r.schedule) sched.push_back(step(s));
    const auto& m = std::get<WeightedAtomicMeasure>(r.measure);
    return Json{{"converged", r.converged},  {"ratio_tol", num(r.ratio_tol)}, {"chosen", step(r.chosen)},
                {"atoms", m.size()},         {"schedule", sched},             {"residuals", to_json(r.residuals)},
                {"max_residual", num(max_residual(r.residuals))}};
}

Json to_json(const TailFit& f) {
    return Json{{"from", f.from}, {"to", f.to}, {"fit", fit_json(f.fit)}, {"log_fit", fit_json(f.log_fit)}, {"decays_summably", f.decays_summably}};
}

Json to_json(const TypeVerdict& v) {
    Json ces = Json::array();
    for (const auto& c : v.cesaro) ces.push_back({{"horizon", c.horizon}, {"liminf_estimate", num(c.liminf_estimate)}});
    Json j{{"label", to_string(v.label)},
           {"period", v.label == MeasureType::I_p ? Json(v.period) : Json(nullptr)},
           {"factor_label", v.factor_label},
           {"horizon", v.horizon},
           {"thresholds",
            {{"cyclic_defect", num(v.thresholds.cyclic_defect)},
             {"delta", num(v.thresholds.delta)},
             {"keep_fraction", num(v.thresholds.keep_fraction)}}},
           {"cyclic_defect", v.cyclic_defect ? num(*v.cyclic_defect) : Json(nullptr)},
           {"summable", v.summable},
           {"summability_forward", v.summability_forward ? to_json(*v.summability_forward) : Json(nullptr)},
           {"summability_backward", v.summability_backward ? to_json(*v.summability_backward) : Json(nullptr)},
           {"cesaro_weight", ces}};
    if (v.cocycle) {
        Json lm = Json::array();
        for (double x : v.cocycle->log_mean_exp_minus_h) lm.push_back(num(x));
        j["cocycle"] = {{"window", {v.cocycle->lo, v.cocycle->hi}},
                        {"sup_abs", num(v.cocycle->sup_abs)},
                        {"min", num(v.cocycle->min)},
                        {"max", num(v.cocycle->max)},
                        {"log_mean_exp_minus_h", lm},
                        {"telescoping_residual", num(v.cocycle->telescoping_residual)}};
    } else {
        j["cocycle"] = nullptr;
    }
    return j;
}

Json to_json(const InvariantMeasureEstimate& e) {
    Json trend = Json::array();
    for (const auto& [n, m] : e.mass_trend) trend.push_back({{"half_width", n}, {"mass", num(m)}});
    return Json{{"total_mass", num(e.total_mass)},
                {"mass_trend", trend},
                {"density", num(e.density)},
                {"finite_mass", e.finite_mass},
                {"invariance_residual", num(e.invariance_residual)}};
}

Json to_json(const FlowPropertyReport& r) {
    Json sups = Json::array();
    for (const auto& s : r.sups) sups.push_back({{"horizon", s.horizon}, {"sup", num(s.sup)}});
    Json ints = Json::array();
    for (double v : r.integrals) ints.push_back(num(v));
    return Json{{"test", r.test},
                {"verdict", r.verdict},
                {"method", r.method},
                {"certified", r.certified},
                {"tol", num(r.tol)},
                {"sups", sups},
                {"growth", r.growth ? fit_json(*r.growth) : Json(nullptr)},
                {"integrals", ints},
                {"notes", r.notes}};
}

Json to_json(const DefectReport& d) {
    Json pts = Json::array();
    for (const auto& p : d.points) pts.push_back({{"n", p.n}, {"defect", num(p.defect)}});
    return Json{{"grid", d.grid}, {"points", pts}, {"majorant_decreasing", d.majorant_decreasing}};
}

Json to_json(const std::vector<ConditionCheck>& checks) {
    Json a = Json::array();
    for (const auto& c : checks)
        a.push_back({{"condition", c.condition}, {"passed", c.passed}, {"margin", num(c.margin)}, {"detail", c.detail}});
    return a;
}

void write_json(const std::string& path, const Json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

void write_spectrum_csv(const std::string& path, const SpectrumVerdict& v) {
    auto out = open_out(path);
    out << "# spectrum scan, one row per beta\n"
        << "# beta: inverse temperature\n"
        << "# verdict: holds | fails | inconclusive\n"
        << "# tail_max_fwd, tail_max_bwd: sup of the Cesaro averages over the last half of the horizon\n"
        << "# horizon: orbit length per side\n"
        << "beta,verdict,tail_max_fwd,tail_max_bwd,horizon\n";
    for (const auto& e : v.evidence)
        out << csv_num(e.beta) << ',' << to_string(e.verdict) << ',' << csv_num(e.tail_max_forward) << ','
            << csv_num(e.tail_max_backward) << ',' << e.horizon << '\n';
}

void write_measure_csv(const std::string& path, const WeightedAtomicMeasure& m, const std::function<double(std::int64_t)>& S_k) {
    auto out = open_out(path);
    out << "# atomic measure on an orbit, one row per atom phi^k(x)\n"
        << "# k: orbit index\n"
        << "# S_k: Birkhoff cocycle S_k(F)(x)\n"
        << "# weight: normalized atom weight (column sums to 1)\n"
        << "k,S_k,weight\n";
    for (const auto& a : m.atoms()) {
        std::int64_t k = a.orbit_index.value_or(0);
        out << k << ',' << csv_num(S_k(k)) << ',' << csv_num(std::exp(a.log_weight)) << '\n';
    }
}

}  // namespace conflab
