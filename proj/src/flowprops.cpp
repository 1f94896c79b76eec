#include "conflab/flowprops.hpp"

#include <algorithm>
#include <cmath>

#include "conflab/errors.hpp"

namespace conflab {

const char* to_string(Evidence e) noexcept {
    switch (e) {
        case Evidence::inner: return "inner_evidence";
        case Evidence::not_inner: return "not_inner_evidence";
        case Evidence::inapplicable: return "inapplicable";
        default: return "inconclusive";
    }
}

InnernessResult innerness_test(const DynSystem& s, PotentialPtr f, const std::vector<Point>& seeds, std::int64_t horizon,
                               double tol) {
    if (seeds.empty()) throw InvalidArgument("innerness_test needs seeds");
    if (horizon < 16) throw InvalidArgument("innerness_test horizon too short");
    InnernessResult r;
    auto& rep = r.report;
    rep.test = "innerness";
    rep.tol = tol;

    if (!s.flags().minimal) {
        rep.method = "none";
        rep.notes.push_back("bounded orbit sums only characterize coboundaries on minimal systems");
        r.evidence = Evidence::inapplicable;
        rep.verdict = to_string(r.evidence);
        return r;
    }

    // sup |S_{n+1}| at each doubling, over all seeds
    std::vector<std::int64_t> hs;
    for (std::int64_t h = horizon / 16; h <= horizon; h *= 2) hs.push_back(h);
    if (hs.back() != horizon) hs.push_back(horizon);
    std::vector<double> sup(hs.size(), 0.0);
    for (const auto& x : seeds) {
        auto t = OrbitSumTable::build(s, f, x, 1.0, 0, horizon);
        for (std::size_t i = 0; i < hs.size(); ++i) sup[i] = std::max(sup[i], sup_partial_sums(t, hs[i] - 1));
    }
    std::vector<double> hx;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        rep.sups.push_back({hs[i], sup[i]});
        hx.push_back(static_cast<double>(hs[i]));
    }
    rep.growth = fit_line(hx, sup);

    const bool plateau = sup.back() <= 1.05 * sup[sup.size() - 2] + tol && sup[sup.size() - 2] <= 1.05 * sup[sup.size() - 3] + tol;
    const bool linear = rep.growth->slope > tol && sup.back() >= 1.8 * sup[sup.size() - 2];
    rep.method = "orbit-sum plateau";
    r.evidence = plateau ? Evidence::inner : linear ? Evidence::not_inner : Evidence::inconclusive;

    // On a rotation a trigonometric potential is decided exactly by its Fourier coefficients.
    if (auto trig = f->as_trig(); trig && s.is_rotation()) {
        auto sol = solve_coboundary_fourier(*trig, s);
        rep.certified = true;
        rep.method = "fourier solve";
        if (auto* h = std::get_if<TrigPoly>(&sol)) {
            rep.notes.push_back("transfer function found, grid residual " +
                                std::to_string(coboundary_grid_residual(*h, *trig, s)));
            r.evidence = Evidence::inner;
        } else {
            rep.notes.push_back("no continuous solution: " + std::get<NoSolution>(sol).reason);
            r.evidence = Evidence::not_inner;
        }
    }
    rep.verdict = to_string(r.evidence);
    return r;
}

ApproxInnerResult approx_inner_test(const DynSystem& s, PotentialPtr f, double tol, const std::vector<Point>& seeds,
                                    std::int64_t horizon) {
    ApproxInnerResult r;
    auto& rep = r.report;
    rep.test = "approximate innerness";
    rep.tol = tol;
    if (s.flags().uniquely_ergodic) {
        std::optional<double> mean = f->known_invariant_mean(s);
        rep.method = "closed-form invariant mean";
        if (!mean) {
            mean = s.integrate_invariant([&](const Point& p) { return f->eval(p); });
            rep.method = "quadrature against the invariant measure";
        }
        rep.integrals.push_back(*mean);
        r.approximately_inner = std::abs(*mean) <= tol;
    } else if (s.is_squaring()) {
        // the ergodic invariant measures are the Dirac masses at the fixed points 0 and 1
        rep.method = "fixed points";
        rep.integrals = {f->eval(interval_point(0.0)), f->eval(interval_point(1.0))};
        r.approximately_inner = std::abs(rep.integrals[0]) <= tol && std::abs(rep.integrals[1]) <= tol;
    } else {
        rep.method = "invariant bracket";
        if (seeds.empty()) throw InvalidArgument("approx_inner_test needs seeds for this system");
        try {
            auto b = invariant_bracket(s, f, seeds, horizon, tol);
            rep.integrals = {b.mean_minus, b.mean_plus};
            r.approximately_inner = std::abs(b.mean_minus) <= tol && std::abs(b.mean_plus) <= tol;
        } catch (const BracketFailed& e) {
            rep.notes.push_back(e.what());
            r.approximately_inner = false;
        }
    }
    rep.verdict = r.approximately_inner ? "approximately inner" : "not approximately inner";
    return r;
}

DefectReport hn_defect(const DynSystem& s, PotentialPtr f, const std::vector<std::int64_t>& n_list, std::size_t grid) {
    DefectReport d;
    std::vector<Point> pts = s.flags().invariant_measure_known ? s.invariant_grid(grid) : std::vector<Point>{};
    if (pts.empty()) {
        if (s.space() != SpaceKind::interval) throw InvalidArgument("hn_defect needs a grid on the phase space");
        for (std::size_t j = 0; j < grid; ++j) pts.push_back(interval_point((static_cast<double>(j) + 0.5) / grid));
    }
    d.grid = pts.size();
    for (std::int64_t n : n_list) {
        if (n < 1) throw InvalidArgument("hn_defect needs n >= 1");
        double worst = 0;
        for (const auto& y : pts) {
            CompensatedSum c;
            for (double v : f->orbit_values(s, y, 1, n).values) c.add(v);
            worst = std::max(worst, std::abs(c.value()) / static_cast<double>(n));
        }
        d.points.push_back({n, worst});
    }
    d.majorant_decreasing = true;
    for (std::size_t i = 1; i < d.points.size(); ++i) {
        double later = 0;
        for (std::size_t j = i; j < d.points.size(); ++j) later = std::max(later, d.points[j].defect);
        d.majorant_decreasing = d.majorant_decreasing && later < d.points[i - 1].defect;
    }
    return d;
}

double hn_value(const DynSystem& s, const Potential& f, const Point& y, std::int64_t n) {
    if (n < 1) throw InvalidArgument("h_n needs n >= 1");
    auto vals = f.orbit_values(s, y, 0, n - 1).values;
    CompensatedSum partial, outer;
    for (std::int64_t j = 1; j <= n; ++j) {
        partial.add(vals[static_cast<std::size_t>(j - 1)]);
        outer.add(partial.value());
    }
    return -outer.value() / static_cast<double>(n);
}

}  // namespace conflab
