#include "conflab/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "conflab/errors.hpp"

namespace conflab {

const char* to_string(MeasureType t) noexcept {
    switch (t) {
        case MeasureType::I_p: return "I_p";
        case MeasureType::I_infinity: return "I_infinity";
        case MeasureType::II_1: return "II_1";
        default: return "II_inf_or_III";
    }
}

CocycleSolution solve_cocycle(const DynSystem& s, PotentialPtr f, const Point& x, double beta, std::int64_t lo,
                              std::int64_t hi) {
    if (lo > 0 || hi < 0) throw InvalidArgument("cocycle window must contain 0");
    return solve_cocycle(OrbitSumTable::build(s, std::move(f), x, beta, -lo, std::max<std::int64_t>(hi - 1, 0)));
}

CocycleSolution solve_cocycle(const OrbitSumTable& t) {
    CocycleSolution c;
    c.base = t.base();
    c.lo = -t.back();
    c.hi = t.fwd() + 1;
    c.beta = t.beta();
    c.h.reserve(static_cast<std::size_t>(c.hi - c.lo + 1));
    c.min = std::numeric_limits<double>::infinity();
    c.max = -c.min;
    for (std::int64_t k = c.lo; k <= c.hi; ++k) {
        double v = t.beta_S(k);
        c.h.push_back(v);
        c.min = std::min(c.min, v);
        c.max = std::max(c.max, v);
        c.sup_abs = std::max(c.sup_abs, std::abs(v));
    }
    for (std::int64_t k = c.lo; k < c.hi; ++k)
        c.telescoping_residual = std::max(c.telescoping_residual, std::abs(c.at(k + 1) - c.at(k) - t.beta() * t.F(k)));
    const std::int64_t reach = std::min(-c.lo, c.hi);
    if (reach >= 8) {
        for (std::int64_t n : {reach / 4, reach / 2, reach}) {
            LogSumExp acc;
            for (std::int64_t k = -n; k <= n; ++k) acc.add(-c.at(k));
            c.log_mean_exp_minus_h.push_back(acc.value() - std::log(static_cast<double>(2 * n + 1)));
        }
    }
    return c;
}

namespace {

std::vector<CesaroWeightPoint> cesaro_weights(const OrbitSumTable& t, std::int64_t H) {
    std::vector<CesaroWeightPoint> out;
    for (std::int64_t h : {H / 4, H / 2, H}) {
        LogSumExp acc;
        double worst = std::numeric_limits<double>::infinity();
        for (std::int64_t n = 1; n <= h; ++n) {
            acc.add(t.beta_S(n));
            if (n >= (h + 1) / 2) worst = std::min(worst, std::exp(acc.value() - std::log(static_cast<double>(n))));
        }
        out.push_back({h, worst});
    }
    return out;
}

bool cesaro_positive(const std::vector<CesaroWeightPoint>& c, const ClassifyThresholds& th) {
    for (const auto& p : c)
        if (!(p.liminf_estimate > th.delta)) return false;
    return c.back().liminf_estimate >= th.keep_fraction * c[c.size() - 2].liminf_estimate;
}

}  // namespace

TypeVerdict classify_measure(const Measure& m, const DynSystem& s, PotentialPtr f, double beta, std::int64_t horizon,
                             const ClassifyThresholds& th) {
    if (horizon < 1000) throw InvalidArgument("classify_measure needs a horizon of at least 1000");
    TypeVerdict v;
    v.horizon = horizon;
    v.thresholds = th;

    std::vector<Point> points;
    if (const auto* a = std::get_if<WeightedAtomicMeasure>(&m)) {
        if (!a->base()) throw InvalidArgument("atomic measures must be supported on a single orbit");
        const Point x = *a->base();
        if (auto p = s.minimal_period(x, std::min<std::int64_t>(horizon, 1 << 20))) {
            auto t = OrbitSumTable::build(s, f, x, beta, 0, *p);
            v.cyclic_defect = t.S(*p);
            if (std::abs(*v.cyclic_defect) <= th.cyclic_defect) {
                v.label = MeasureType::I_p;
                v.period = *p;
                v.factor_label = factor_report(v);
                return v;
            }
        }
        auto t = OrbitSumTable::build(s, f, x, beta, horizon, horizon);
        auto sum = atomic_summable(t, horizon);
        if (auto* ok = std::get_if<SummableMeasure>(&sum)) {
            v.summable = true;
            v.summability_forward = ok->forward;
            v.summability_backward = ok->backward;
        } else {
            const auto& d = std::get<Divergent>(sum);
            v.summability_forward = d.forward;
            v.summability_backward = d.backward;
        }
        v.cesaro = cesaro_weights(t, horizon);
        v.cocycle = solve_cocycle(t);
        if (v.summable)
            v.label = MeasureType::I_infinity;
        else if (cesaro_positive(v.cesaro, th))
            v.label = MeasureType::II_1;
        v.factor_label = factor_report(v);
        return v;
    }

    // A density measure has no atoms; test the Cesaro condition at a few typical points.
    const auto& d = std::get<DensityMeasure>(m);
    const std::size_t step = std::max<std::size_t>(1, d.grid() / 4);
    bool all_positive = true;
    for (std::size_t i = step / 2; i < d.grid(); i += step) {
        auto t = OrbitSumTable::build(s, f, d.nodes()[i], beta, horizon, horizon);
        auto c = cesaro_weights(t, horizon);
        if (v.cesaro.empty() || c.back().liminf_estimate < v.cesaro.back().liminf_estimate) {
            v.cesaro = c;
            v.cocycle = solve_cocycle(t);
        }
        all_positive = all_positive && cesaro_positive(c, th);
    }
    if (all_positive) v.label = MeasureType::II_1;
    v.factor_label = factor_report(v);
    return v;
}

InvariantMeasureEstimate invariant_from_cocycle(const WeightedAtomicMeasure& m, const CocycleSolution& sol,
                                                const DynSystem& s) {
    if (!m.base() || !same_point(*m.base(), sol.base, 1e-12))
        throw SupportMismatch("measure is not supported on the cocycle's orbit");
    InvariantMeasureEstimate e;
    LogSumExp total;
    for (const auto& a : m.atoms()) {
        if (!a.orbit_index || *a.orbit_index < sol.lo || *a.orbit_index > sol.hi)
            throw SupportMismatch("atom outside the cocycle window");
        // log w_k with the measure's normalizer restored, so the scale matches e^{beta S_k}
        double lw = a.log_weight + m.log_normalizer() - sol.at(*a.orbit_index);
        e.index.push_back(*a.orbit_index);
        e.log_weight.push_back(lw);
        total.add(lw);
    }
    e.total_mass = std::exp(total.value());

    const std::int64_t lo = e.index.front(), hi = e.index.back();
    const std::int64_t reach = std::max(std::min(-lo, hi), std::int64_t{0});
    std::vector<std::int64_t> widths;
    if (reach == 0 || hi - lo + 1 <= 8) {
        widths.push_back(std::max(-lo, hi));
    } else {
        for (std::int64_t n = std::max<std::int64_t>(1, reach / 8); n < reach; n *= 2) widths.push_back(n);
        widths.push_back(reach);
    }
    for (std::int64_t n : widths) {
        LogSumExp acc;
        for (std::size_t i = 0; i < e.index.size(); ++i)
            if (std::abs(e.index[i]) <= n) acc.add(e.log_weight[i]);
        e.mass_trend.push_back({n, acc.empty() ? 0.0 : std::exp(acc.value())});
    }
    const auto& last = e.mass_trend.back();
    std::int64_t atoms_in_last = 0;
    for (auto k : e.index) atoms_in_last += std::abs(k) <= last.first;
    e.density = last.second / static_cast<double>(std::max<std::int64_t>(atoms_in_last, 1));
    // A finite orbit caps the mass; otherwise compare the last two doublings.
    auto period = s.minimal_period(sol.base, std::min<std::int64_t>(hi - lo + 1, 1 << 20));
    if (period && *period <= hi - lo + 1)
        e.finite_mass = true;
    else if (e.mass_trend.size() >= 2)
        e.finite_mass = last.second <= 1.25 * e.mass_trend[e.mass_trend.size() - 2].second;
    else
        e.finite_mass = false;

    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < e.index.size(); ++i) atoms.push_back({m.atoms()[i].point, e.log_weight[i], e.index[i]});
    auto nu = WeightedAtomicMeasure::from_log_weights(std::move(atoms), *m.base());
    for (const auto& tf : standard_test_functions(s)) {
        double a = nu.integrate(tf.fn);
        double b = nu.integrate([&](const Point& p) { return tf.fn(s.step(p)); });
        e.invariance_residual = std::max(e.invariance_residual, std::abs(a - b));
    }
    return e;
}

std::string factor_report(const TypeVerdict& v) {
    switch (v.label) {
        case MeasureType::I_p: {
            std::string p = std::to_string(v.period);
            return "not a factor; M_" + p + "(C)⊗L^∞(T)";
        }
        case MeasureType::I_infinity: return "factor of type I_∞";
        case MeasureType::II_1: return "factor of type II_1";
        default: return "factor of type II_∞ or III (not decided by finite computation)";
    }
}

}  // namespace conflab
