#include "conflab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "conflab/errors.hpp"

namespace conflab {

std::vector<TestFunction> standard_test_functions(const DynSystem& s) {
    std::vector<TestFunction> out;
    if (s.is_finite()) {
        for (int j = 1; j <= s.period(); ++j)
            out.push_back({"1_{" + std::to_string(j) + "}",
                           [j](const Point& x) { return std::get<FinitePoint>(x).index == j ? 1.0 : 0.0; }, 1.0});
        return out;
    }
    out.push_back({"1", [](const Point&) { return 1.0; }, 1.0});
    if (s.space() == SpaceKind::interval) {
        for (int j = 1; j <= 4; ++j)
            out.push_back({"x^" + std::to_string(j), [j](const Point& x) { return std::pow(std::get<IntervalPoint>(x).x, j); },
                           1.0});
        return out;
    }
    DynSystem sys = s;
    for (int j = 1; j <= 4; ++j) {
        const double w = 2.0 * std::numbers::pi * j;
        out.push_back({"cos(2pi*" + std::to_string(j) + "x)", [w, sys](const Point& x) { return std::cos(w * sys.coordinate(x)); },
                       1.0});
        out.push_back({"sin(2pi*" + std::to_string(j) + "x)", [w, sys](const Point& x) { return std::sin(w * sys.coordinate(x)); },
                       1.0});
    }
    return out;
}

WeightedAtomicMeasure WeightedAtomicMeasure::from_log_weights(std::vector<Atom> atoms, std::optional<Point> base) {
    if (atoms.empty()) throw InvalidArgument("atomic measure needs at least one atom");
    LogSumExp z;
    for (const auto& a : atoms) {
        if (!std::isfinite(a.log_weight)) throw InvalidArgument("atom log-weights must be finite");
        z.add(a.log_weight);
    }
    WeightedAtomicMeasure m;
    m.log_normalizer_ = z.value();
    for (auto& a : atoms) a.log_weight -= m.log_normalizer_;
    m.atoms_ = std::move(atoms);
    m.base_ = std::move(base);
    return m;
}

WeightedAtomicMeasure WeightedAtomicMeasure::on_orbit(const DynSystem& s, const Point& x, std::int64_t lo,
                                                      const std::vector<double>& log_weights) {
    if (log_weights.empty()) throw InvalidArgument("atomic measure needs at least one atom");
    auto pts = s.orbit_range(x, lo, lo + static_cast<std::int64_t>(log_weights.size()) - 1);
    std::vector<Atom> atoms;
    atoms.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        atoms.push_back({pts[i], log_weights[i], lo + static_cast<std::int64_t>(i)});
    return from_log_weights(std::move(atoms), x);
}

double WeightedAtomicMeasure::weight(std::size_t i) const { return std::exp(atoms_.at(i).log_weight); }

std::vector<double> WeightedAtomicMeasure::weights() const {
    std::vector<double> w;
    w.reserve(atoms_.size());
    for (const auto& a : atoms_) w.push_back(std::exp(a.log_weight));
    return w;
}

std::optional<std::int64_t> WeightedAtomicMeasure::first_index() const {
    if (!base_ || atoms_.empty()) return std::nullopt;
    return atoms_.front().orbit_index;
}

std::optional<std::int64_t> WeightedAtomicMeasure::last_index() const {
    if (!base_ || atoms_.empty()) return std::nullopt;
    return atoms_.back().orbit_index;
}

double WeightedAtomicMeasure::integrate(const std::function<double(const Point&)>& f) const {
    CompensatedSum s;
    for (const auto& a : atoms_) s.add(std::exp(a.log_weight) * f(a.point));
    return s.value();
}

DensityMeasure DensityMeasure::build(const DynSystem& s, std::function<double(const Point&)> log_density, std::size_t grid,
                                     std::string label) {
    if (!s.flags().uniquely_ergodic || !s.flags().invariant_measure_known)
        throw InvalidArgument("density measures need a uniquely ergodic system with known invariant measure");
    DensityMeasure m;
    m.nodes_ = s.invariant_grid(grid);
    std::vector<double> logs;
    logs.reserve(m.nodes_.size());
    for (const auto& p : m.nodes_) logs.push_back(log_density(p));
    // reference weights are 1/grid
    m.log_normalizer_ = log_sum_exp(logs) - std::log(static_cast<double>(m.nodes_.size()));
    m.weights_.reserve(logs.size());
    const double shift = m.log_normalizer_ + std::log(static_cast<double>(m.nodes_.size()));
    for (double l : logs) m.weights_.push_back(std::exp(l - shift));
    m.log_density_ = std::move(log_density);
    m.label_ = std::move(label);
    m.reference_ = s.is_finite() ? "uniform on the cycle" : s.is_rotation() ? "Lebesgue" : "pushforward of Lebesgue";
    return m;
}

double DensityMeasure::density(const Point& x) const { return std::exp(log_density_(x) - log_normalizer_); }

double DensityMeasure::integrate(const std::function<double(const Point&)>& f) const {
    CompensatedSum s;
    for (std::size_t i = 0; i < nodes_.size(); ++i) s.add(weights_[i] * f(nodes_[i]));
    return s.value();
}

double integrate(const Measure& m, const std::function<double(const Point&)>& f) {
    return std::visit([&](const auto& mm) { return mm.integrate(f); }, m);
}

namespace {

// Atom points, their images and F at each atom.
struct Pushforward {
    std::vector<Point> points, images;
    std::vector<double> weights, f_values;
};

Pushforward pushforward(const WeightedAtomicMeasure& m, const DynSystem& s, const Potential& f) {
    Pushforward p;
    for (const auto& a : m.atoms()) {
        p.points.push_back(a.point);
        p.images.push_back(s.step(a.point));
        p.weights.push_back(std::exp(a.log_weight));
    }
    auto lo = m.first_index(), hi = m.last_index();
    if (lo && hi && *hi - *lo + 1 == static_cast<std::int64_t>(m.size())) {
        // orbit values go through orbit_values so completed potentials are honoured
        p.f_values = f.orbit_values(s, *m.base(), *lo, *hi).values;
    } else {
        for (const auto& x : p.points) p.f_values.push_back(f.eval(x));
    }
    return p;
}

Pushforward pushforward(const DensityMeasure& m, const DynSystem& s, const Potential& f) {
    Pushforward p;
    p.points = m.nodes();
    p.weights = m.node_weights();
    for (const auto& x : p.points) {
        p.images.push_back(s.step(x));
        p.f_values.push_back(f.eval(x));
    }
    return p;
}

}  // namespace

std::vector<Residual> conformality_residual(const Measure& m, const DynSystem& s, const Potential& f, double beta,
                                            const std::vector<TestFunction>& tests) {
    Pushforward p = std::visit([&](const auto& mm) { return pushforward(mm, s, f); }, m);
    std::vector<double> factor(p.weights.size());
    for (std::size_t i = 0; i < factor.size(); ++i) factor[i] = p.weights[i] * std::exp(beta * p.f_values[i]);
    std::vector<Residual> out;
    for (const auto& t : tests) {
        CompensatedSum lhs, rhs;
        for (std::size_t i = 0; i < factor.size(); ++i) {
            lhs.add(p.weights[i] * t.fn(p.points[i]));
            rhs.add(factor[i] * t.fn(p.images[i]));
        }
        out.push_back({t.name, std::abs(lhs.value() - rhs.value())});
    }
    return out;
}

double max_residual(const std::vector<Residual>& r) {
    double m = 0;
    for (const auto& x : r) m = std::max(m, x.value);
    return m;
}

}  // namespace conflab
