#include "conflab/potential.hpp"

#include <cmath>
#include <numbers>

#include "conflab/appendix_a.hpp"
#include "conflab/appendix_b.hpp"
#include "conflab/errors.hpp"

namespace conflab {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double real_coordinate(const Point& x) {
    if (auto c = std::get_if<CirclePoint>(&x)) return c->x;
    if (auto i = std::get_if<IntervalPoint>(&x)) return i->x;
    throw SpaceMismatch(std::string("potential needs a real coordinate, got a ") + space_name(space_of(x)) + " point");
}

double circle_coordinate(const Point& x) {
    if (auto c = std::get_if<CirclePoint>(&x)) return c->x;
    throw SpaceMismatch(std::string("potential lives on the circle, got a ") + space_name(space_of(x)) + " point");
}

}  // namespace

TrigPoly::TrigPoly(std::map<int, std::complex<double>> coefficients) : coefficients_(std::move(coefficients)) {
    for (const auto& [n, c] : coefficients_) {
        auto it = coefficients_.find(-n);
        std::complex<double> partner = it == coefficients_.end() ? std::complex<double>(0) : it->second;
        if (std::abs(partner - std::conj(c)) > 1e-14 * (1.0 + std::abs(c)))
            throw InvalidArgument("trigonometric polynomial is not real-valued: c(-" + std::to_string(n) +
                                  ") must be the conjugate of c(" + std::to_string(n) + ")");
    }
}

TrigPoly TrigPoly::cos_sin(int n, double a, double b) {
    if (n == 0) return TrigPoly({{0, {a, 0.0}}});
    if (n < 0) {
        n = -n;
        b = -b;
    }
    return TrigPoly({{n, {a / 2, -b / 2}}, {-n, {a / 2, b / 2}}});
}

double TrigPoly::eval(double x) const {
    double v = 0;
    for (const auto& [n, c] : coefficients_) {
        if (n < 0) continue;
        if (n == 0) {
            v += c.real();
            continue;
        }
        double ph = two_pi * n * x;
        v += 2.0 * (c.real() * std::cos(ph) - c.imag() * std::sin(ph));
    }
    return v;
}

std::complex<double> TrigPoly::coefficient(int n) const {
    auto it = coefficients_.find(n);
    return it == coefficients_.end() ? std::complex<double>(0) : it->second;
}

double TrigPoly::coefficient_l1() const {
    double s = 0;
    for (const auto& [n, c] : coefficients_) s += std::abs(c);
    return s;
}

TrigPoly TrigPoly::operator+(const TrigPoly& other) const {
    auto m = coefficients_;
    for (const auto& [n, c] : other.coefficients_) m[n] += c;
    return TrigPoly(std::move(m));
}

TrigPoly TrigPoly::scaled(double s) const {
    auto m = coefficients_;
    for (auto& [n, c] : m) c *= s;
    return TrigPoly(std::move(m));
}

Potential::Potential(Kind k) : kind_(std::move(k)) {}

PotentialPtr Potential::constant(double c) { return std::make_shared<Potential>(Constant{c}); }
PotentialPtr Potential::trig(TrigPoly p) { return std::make_shared<Potential>(Trig{std::move(p)}); }
PotentialPtr Potential::polynomial(std::vector<double> c) { return std::make_shared<Potential>(Polynomial{std::move(c)}); }

PotentialPtr Potential::table(std::vector<double> values) {
    if (values.empty()) throw InvalidArgument("finite potential table must be nonempty");
    return std::make_shared<Potential>(Table{std::move(values)});
}

PotentialPtr Potential::coboundary(PotentialPtr transfer, DynSystem system) {
    if (!transfer) throw InvalidArgument("coboundary needs a transfer function");
    return std::make_shared<Potential>(Coboundary{std::move(transfer), std::move(system)});
}

PotentialPtr Potential::shifted(PotentialPtr base, DynSystem system, std::int64_t shift) {
    if (!base) throw InvalidArgument("shifted potential needs a base");
    return std::make_shared<Potential>(Shifted{std::move(base), std::move(system), shift});
}

PotentialPtr Potential::sum(std::vector<std::pair<double, PotentialPtr>> terms) {
    for (const auto& t : terms)
        if (!t.second) throw InvalidArgument("sum term is empty");
    return std::make_shared<Potential>(Sum{std::move(terms)});
}

PotentialPtr Potential::appendix_a(std::shared_ptr<const AppendixAPotential> c) {
    return std::make_shared<Potential>(AppendixA{std::move(c)});
}

PotentialPtr Potential::appendix_b(std::shared_ptr<const AppendixBPotential> c) {
    return std::make_shared<Potential>(AppendixB{std::move(c)});
}

PotentialPtr Potential::function(std::function<double(const Point&)> fn, std::string label) {
    return std::make_shared<Potential>(Function{std::move(fn), std::move(label)});
}

PotentialPtr Potential::time_reversed(PotentialPtr f, const DynSystem& s) {
    return sum({{-1.0, shifted(std::move(f), s, -1)}});
}

std::string Potential::kind_name() const {
    static const char* names[] = {"constant", "trig", "polynomial", "table", "coboundary",
                                  "shifted", "sum", "appendix_a", "appendix_b", "function"};
    return names[kind_.index()];
}

double Potential::eval(const Point& x) const {
    return std::visit(
        [&](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Constant>) return k.value;
            else if constexpr (std::is_same_v<T, Trig>) return k.poly.eval(circle_coordinate(x));
            else if constexpr (std::is_same_v<T, Polynomial>) {
                double v = 0, c = real_coordinate(x);
                for (auto it = k.coefficients.rbegin(); it != k.coefficients.rend(); ++it) v = v * c + *it;
                return v;
            } else if constexpr (std::is_same_v<T, Table>) {
                auto f = std::get_if<FinitePoint>(&x);
                if (!f || f->index < 1 || f->index > static_cast<int>(k.values.size()))
                    throw SpaceMismatch("table potential needs a finite point in 1.." + std::to_string(k.values.size()));
                return k.values[static_cast<std::size_t>(f->index - 1)];
            } else if constexpr (std::is_same_v<T, Coboundary>) {
                return k.transfer->eval(k.system.step(x)) - k.transfer->eval(x);
            } else if constexpr (std::is_same_v<T, Shifted>) {
                return k.base->eval(k.system.iterate(x, k.shift));
            } else if constexpr (std::is_same_v<T, Sum>) {
                double v = 0;
                for (const auto& [w, f] : k.terms) v += w * f->eval(x);
                return v;
            } else if constexpr (std::is_same_v<T, AppendixA>) {
                return k.construction->eval(circle_coordinate(x));
            } else if constexpr (std::is_same_v<T, AppendixB>) {
                if (auto e = std::get_if<ExactCirclePoint>(&x)) return k.construction->eval(*e);
                return k.construction->eval(circle_coordinate(x));
            } else {
                return k.fn(x);
            }
        },
        kind_);
}

double Potential::tail_bound() const {
    return std::visit(
        [](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, AppendixA> || std::is_same_v<T, AppendixB>) return k.construction->tail_bound();
            else if constexpr (std::is_same_v<T, Coboundary>) return 2.0 * k.transfer->tail_bound();
            else if constexpr (std::is_same_v<T, Shifted>) return k.base->tail_bound();
            else if constexpr (std::is_same_v<T, Sum>) {
                double s = 0;
                for (const auto& [w, f] : k.terms) s += std::abs(w) * f->tail_bound();
                return s;
            } else return 0.0;
        },
        kind_);
}

OrbitValues Potential::orbit_values(const DynSystem& s, const Point& x, std::int64_t lo, std::int64_t hi) const {
    if (lo > hi) throw InvalidArgument("orbit window needs lo <= hi");
    OrbitValues out;
    out.lo = lo;
    const std::size_t len = static_cast<std::size_t>(hi - lo + 1);

    if (auto A = std::get_if<AppendixA>(&kind_)) {
        const auto& c = *A->construction;
        auto cp = std::get_if<CirclePoint>(&x);
        std::optional<int> base = cp && s.same_as(c.system()) ? c.base_point_index(cp->x) : std::nullopt;
        if (base) {
            out.values.resize(len);
            for (std::int64_t k = lo; k <= hi; ++k) {
                out.values[static_cast<std::size_t>(k - lo)] =
                    std::abs(k) <= c.exact_window() ? c.completed_value(*base, k)
                                                    : c.eval(std::get<CirclePoint>(s.iterate(x, k)).x);
            }
            out.exact_window = c.exact_window();
            return out;
        }
    }
    if (auto C = std::get_if<Coboundary>(&kind_); C && s.same_as(C->system)) {
        OrbitValues h = C->transfer->orbit_values(s, x, lo, hi + 1);
        out.values.resize(len);
        for (std::size_t i = 0; i < len; ++i) out.values[i] = h.values[i + 1] - h.values[i];
        if (h.exact_window) out.exact_window = std::max<std::int64_t>(0, *h.exact_window - 1);
        return out;
    }
    if (auto Sh = std::get_if<Shifted>(&kind_); Sh && s.same_as(Sh->system)) {
        OrbitValues b = Sh->base->orbit_values(s, x, lo + Sh->shift, hi + Sh->shift);
        out.values = std::move(b.values);
        if (b.exact_window) out.exact_window = std::max<std::int64_t>(0, *b.exact_window - std::abs(Sh->shift));
        return out;
    }
    if (auto S = std::get_if<Sum>(&kind_)) {
        out.values.assign(len, 0.0);
        bool truncated = false, window_missing = false;
        std::optional<std::int64_t> window;
        for (const auto& [w, f] : S->terms) {
            OrbitValues t = f->orbit_values(s, x, lo, hi);
            for (std::size_t i = 0; i < len; ++i) out.values[i] += w * t.values[i];
            if (f->tail_bound() > 0) {
                truncated = true;
                if (t.exact_window) window = window ? std::min(*window, *t.exact_window) : *t.exact_window;
                else window_missing = true;
            }
        }
        if (truncated && !window_missing) out.exact_window = window;
        return out;
    }

    auto pts = s.orbit_range(x, lo, hi);
    out.values.resize(len);
    for (std::size_t i = 0; i < len; ++i) out.values[i] = eval(pts[i]);
    return out;
}

std::optional<double> Potential::known_invariant_mean(const DynSystem& s) const {
    return std::visit(
        [&](const auto& k) -> std::optional<double> {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Constant>) return k.value;
            else if constexpr (std::is_same_v<T, Trig>) {
                if (s.is_rotation()) return k.poly.mean();
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, Polynomial>) {
                if (!s.is_rotation()) return std::nullopt;
                double v = 0;
                for (std::size_t i = 0; i < k.coefficients.size(); ++i) v += k.coefficients[i] / static_cast<double>(i + 1);
                return v;
            } else if constexpr (std::is_same_v<T, Table>) {
                if (!s.is_finite() || s.period() != static_cast<int>(k.values.size())) return std::nullopt;
                CompensatedSum c;
                for (double v : k.values) c.add(v);
                return c.value() / static_cast<double>(k.values.size());
            } else if constexpr (std::is_same_v<T, Coboundary>) {
                // integral of H o phi - H vanishes for every phi-invariant measure
                if (s.same_as(k.system) || s.same_as(k.system.reversed())) return 0.0;
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, Shifted>) {
                if (s.same_as(k.system) || s.same_as(k.system.reversed())) return k.base->known_invariant_mean(s);
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, Sum>) {
                double v = 0;
                for (const auto& [w, f] : k.terms) {
                    auto m = f->known_invariant_mean(s);
                    if (!m) return std::nullopt;
                    v += w * *m;
                }
                return v;
            } else if constexpr (std::is_same_v<T, AppendixA>) {
                const auto& sys = k.construction->system();
                if (s.same_as(sys) || s.same_as(sys.reversed())) return 0.0;
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, AppendixB>) {
                const auto sys = k.construction->system();
                if (s.same_as(sys) || s.same_as(sys.reversed())) return 0.0;
                return std::nullopt;
            } else return std::nullopt;
        },
        kind_);
}

std::optional<TrigPoly> Potential::as_trig() const {
    if (auto t = std::get_if<Trig>(&kind_)) return t->poly;
    if (auto c = std::get_if<Constant>(&kind_)) return TrigPoly::cos_sin(0, c->value, 0.0);
    if (auto s = std::get_if<Sum>(&kind_)) {
        TrigPoly acc;
        for (const auto& [w, f] : s->terms) {
            auto p = f->as_trig();
            if (!p) return std::nullopt;
            acc = acc + p->scaled(w);
        }
        return acc;
    }
    return std::nullopt;
}

std::variant<TrigPoly, NoSolution> solve_coboundary_fourier(const TrigPoly& f, const DynSystem& rotation) {
    if (!rotation.is_rotation()) throw InvalidArgument("Fourier coboundary solve needs an irrational rotation");
    double mean = f.coefficient(0).real();
    if (std::abs(f.coefficient(0)) > 1e-14) return NoSolution{"nonzero mean", mean};
    const double alpha = *rotation.rotation_number();
    std::map<int, std::complex<double>> h;
    for (const auto& [n, c] : f.coefficients()) {
        if (n == 0) continue;
        std::complex<double> e = std::polar(1.0, two_pi * n * alpha) - 1.0;
        h[n] = c / e;
    }
    // Enforce exact conjugate symmetry after the division.
    for (auto& [n, c] : h)
        if (n > 0) h[-n] = std::conj(c);
    return TrigPoly(std::move(h));
}

double coboundary_grid_residual(const TrigPoly& h, const TrigPoly& f, const DynSystem& rotation, std::size_t grid) {
    const double alpha = *rotation.rotation_number();
    double worst = 0;
    for (std::size_t j = 0; j < grid; ++j) {
        double x = static_cast<double>(j) / static_cast<double>(grid);
        worst = std::max(worst, std::abs(h.eval(frac(x + alpha)) - h.eval(x) - f.eval(x)));
    }
    return worst;
}

double truncation_tail_bound(const Potential& f) { return f.tail_bound(); }

}  // namespace conflab
