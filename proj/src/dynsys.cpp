#include "conflab/dynsys.hpp"

#include <cmath>
#include <numbers>

#include "conflab/errors.hpp"

namespace conflab {

Point circle_point(double x) {
    if (!std::isfinite(x)) throw InvalidArgument("circle coordinate must be finite");
    return CirclePoint{frac(x)};
}

Point interval_point(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("interval coordinate must lie in [0,1]");
    return IntervalPoint{x};
}

Point finite_point(int index) {
    if (index < 1) throw InvalidArgument("finite point index starts at 1");
    return FinitePoint{index};
}

Point exact_circle_point(Rational offset, std::int64_t alpha_multiple) {
    Rational reduced = offset - Rational(BigInt(numerator(offset) / denominator(offset)));
    if (reduced < 0) reduced += 1;
    return ExactCirclePoint{reduced, alpha_multiple};
}

SpaceKind space_of(const Point& x) noexcept {
    switch (x.index()) {
        case 1: return SpaceKind::interval;
        case 2: return SpaceKind::finite;
        default: return SpaceKind::circle;
    }
}

const char* space_name(SpaceKind s) noexcept {
    switch (s) {
        case SpaceKind::circle: return "circle";
        case SpaceKind::interval: return "interval";
        case SpaceKind::finite: return "finite";
    }
    return "?";
}

double circle_distance(double a, double b) noexcept {
    double d = std::fmod(std::abs(a - b), 1.0);
    return std::min(d, 1.0 - d);
}

namespace {

double sine_inverse(double x, double delta) {
    const double k = delta / (2 * std::numbers::pi);
    double y = x;
    for (int i = 0; i < 60; ++i) {
        double g = y + k * std::sin(2 * std::numbers::pi * y) - x;
        double dy = g / (1 + delta * std::cos(2 * std::numbers::pi * y));
        y -= dy;
        if (std::abs(dy) < 1e-17) break;
    }
    return y;
}

}  // namespace

DynSystem DynSystem::rotation(ContinuedFraction alpha) { return DynSystem(Rotation{std::move(alpha)}); }

DynSystem DynSystem::finite_cycle(int period) {
    if (period < 1) throw InvalidArgument("cycle period must be positive");
    return DynSystem(FiniteCycle{period});
}

DynSystem DynSystem::squaring_map() { return DynSystem(SquaringMap{}); }

DynSystem DynSystem::conjugated_rotation(ContinuedFraction alpha, CircleMap h, CircleMap h_inverse, std::string label) {
    if (!h || !h_inverse) throw InvalidArgument("conjugacy needs both h and its inverse");
    return DynSystem(ConjugatedRotation{std::move(alpha), std::move(h), std::move(h_inverse), std::move(label)});
}

DynSystem DynSystem::sine_conjugated_rotation(ContinuedFraction alpha, double delta) {
    if (!(std::abs(delta) < 1.0)) throw InvalidArgument("sine conjugacy needs |delta| < 1 to stay a homeomorphism");
    CircleMap h = [delta](double x) { return frac(x + delta / (2 * std::numbers::pi) * std::sin(2 * std::numbers::pi * x)); };
    CircleMap hi = [delta](double x) { return frac(sine_inverse(x, delta)); };
    return conjugated_rotation(std::move(alpha), h, hi, "sine(delta=" + std::to_string(delta) + ")");
}

SpaceKind DynSystem::space() const noexcept {
    if (is_finite()) return SpaceKind::finite;
    if (is_squaring()) return SpaceKind::interval;
    return SpaceKind::circle;
}

SystemFlags DynSystem::flags() const noexcept {
    if (is_squaring()) return {false, false, false};
    return {true, true, true};
}

std::string DynSystem::name() const {
    std::string base = std::visit(
        [](const auto& k) -> std::string {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Rotation>) return "rotation(" + k.alpha.name() + ")";
            else if constexpr (std::is_same_v<T, FiniteCycle>) return "finite_cycle(" + std::to_string(k.period) + ")";
            else if constexpr (std::is_same_v<T, SquaringMap>) return "squaring_map";
            else return "conjugated_rotation(" + k.alpha.name() + ", " + k.label + ")";
        },
        kind_);
    return reversed_ ? "inverse of " + base : base;
}

std::optional<double> DynSystem::rotation_number() const {
    const auto* cf = continued_fraction();
    if (!cf) return std::nullopt;
    return reversed_ ? 1.0 - cf->value() : cf->value();
}

const ContinuedFraction* DynSystem::continued_fraction() const noexcept {
    if (auto r = std::get_if<Rotation>(&kind_)) return &r->alpha;
    if (auto c = std::get_if<ConjugatedRotation>(&kind_)) return &c->alpha;
    return nullptr;
}

int DynSystem::period() const {
    if (auto f = std::get_if<FiniteCycle>(&kind_)) return f->period;
    throw InvalidArgument("period() is defined for finite cycles only");
}

DynSystem DynSystem::reversed() const {
    DynSystem r = *this;
    r.reversed_ = !reversed_;
    return r;
}

bool DynSystem::contains(const Point& x) const noexcept {
    return std::visit(
        [this](const auto& p) -> bool {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, CirclePoint>) return space() == SpaceKind::circle && p.x >= 0.0 && p.x < 1.0;
            else if constexpr (std::is_same_v<T, IntervalPoint>) return is_squaring() && p.x >= 0.0 && p.x <= 1.0;
            else if constexpr (std::is_same_v<T, FinitePoint>)
                return is_finite() && p.index >= 1 && p.index <= std::get<FiniteCycle>(kind_).period;
            else return is_rotation();
        },
        x);
}

void DynSystem::require_member(const Point& x) const {
    if (!contains(x))
        throw SpaceMismatch(std::string("point in ") + space_name(space_of(x)) + " space does not belong to " + name());
}

Point DynSystem::step_forward(const Point& x, bool forward) const {
    if (reversed_) forward = !forward;
    return std::visit(
        [&](const auto& k) -> Point {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Rotation>) {
                if (auto e = std::get_if<ExactCirclePoint>(&x))
                    return ExactCirclePoint{e->offset, e->alpha_multiple + (forward ? 1 : -1)};
                double v = std::get<CirclePoint>(x).x;
                return CirclePoint{frac(forward ? v + k.alpha.value() : v - k.alpha.value())};
            } else if constexpr (std::is_same_v<T, FiniteCycle>) {
                int j = std::get<FinitePoint>(x).index;
                if (forward) return FinitePoint{j == k.period ? 1 : j + 1};
                return FinitePoint{j == 1 ? k.period : j - 1};
            } else if constexpr (std::is_same_v<T, SquaringMap>) {
                double v = std::get<IntervalPoint>(x).x;
                return IntervalPoint{forward ? v * v : std::sqrt(v)};
            } else {
                double y = k.h_inverse(std::get<CirclePoint>(x).x);
                double a = k.alpha.value();
                return CirclePoint{frac(k.h(frac(forward ? y + a : y - a)))};
            }
        },
        kind_);
}

Point DynSystem::step(const Point& x, Direction d) const {
    require_member(x);
    return step_forward(x, d == Direction::forward);
}

Point DynSystem::iterate(const Point& x, std::int64_t k) const {
    require_member(x);
    if (k == 0) return x;
    std::int64_t signed_k = reversed_ ? -k : k;
    if (auto r = std::get_if<Rotation>(&kind_)) {
        if (auto e = std::get_if<ExactCirclePoint>(&x)) return ExactCirclePoint{e->offset, e->alpha_multiple + signed_k};
        long double v = std::get<CirclePoint>(x).x;
        return CirclePoint{static_cast<double>(frac(v + static_cast<long double>(signed_k) * r->alpha.value_ld()))};
    }
    if (auto c = std::get_if<ConjugatedRotation>(&kind_)) {
        long double y = c->h_inverse(std::get<CirclePoint>(x).x);
        double moved = static_cast<double>(frac(y + static_cast<long double>(signed_k) * c->alpha.value_ld()));
        return CirclePoint{frac(c->h(moved))};
    }
    if (auto f = std::get_if<FiniteCycle>(&kind_)) {
        std::int64_t j = std::get<FinitePoint>(x).index - 1;
        std::int64_t m = ((j + signed_k) % f->period + f->period) % f->period;
        return FinitePoint{static_cast<int>(m + 1)};
    }
    Point y = x;
    bool fwd = k > 0;
    for (std::int64_t i = 0; i < (k > 0 ? k : -k); ++i) y = step_forward(y, fwd);
    return y;
}

std::vector<Point> DynSystem::orbit_segment(const Point& x, std::int64_t n_back, std::int64_t m_fwd) const {
    if (n_back < 0 || m_fwd < 0) throw InvalidArgument("orbit_segment needs nonnegative lengths");
    return orbit_range(x, -n_back, m_fwd);
}

std::vector<Point> DynSystem::orbit_range(const Point& x, std::int64_t lo, std::int64_t hi) const {
    require_member(x);
    if (lo > hi) throw InvalidArgument("orbit_range needs lo <= hi");
    if (is_squaring()) {
        // sequential steps from the nearest end to x
        std::int64_t anchor = lo > 0 ? lo : (hi < 0 ? hi : 0);
        Point a = iterate(x, anchor);
        std::vector<Point> tmp(static_cast<std::size_t>(hi - lo + 1), a);
        for (std::int64_t k = anchor + 1; k <= hi; ++k) tmp[k - lo] = step_forward(tmp[k - 1 - lo], true);
        for (std::int64_t k = anchor - 1; k >= lo; --k) tmp[k - lo] = step_forward(tmp[k + 1 - lo], false);
        return tmp;
    }
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (std::int64_t k = lo; k <= hi; ++k) out.push_back(iterate(x, k));
    return out;
}

double DynSystem::coordinate(const Point& x) const { return static_cast<double>(coordinate_hp(x)); }

HighFloat DynSystem::coordinate_hp(const Point& x) const {
    return std::visit(
        [this](const auto& p) -> HighFloat {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, FinitePoint>) return HighFloat(p.index);
            else if constexpr (std::is_same_v<T, ExactCirclePoint>) {
                const auto* cf = continued_fraction();
                if (!cf) throw SpaceMismatch("exact circle point needs a rotation");
                HighFloat off = HighFloat(numerator(p.offset)) / HighFloat(denominator(p.offset));
                return frac(off + HighFloat(p.alpha_multiple) * cf->value_hp());
            } else return HighFloat(p.x);
        },
        x);
}

std::optional<std::int64_t> DynSystem::minimal_period(const Point& x, std::int64_t max_period) const {
    require_member(x);
    if (auto f = std::get_if<FiniteCycle>(&kind_)) {
        if (f->period <= max_period) return f->period;
        return std::nullopt;
    }
    if (is_squaring()) {
        double v = std::get<IntervalPoint>(x).x;
        if (v == 0.0 || v == 1.0) return 1;
    }
    return std::nullopt;
}

std::vector<Point> DynSystem::invariant_grid(std::size_t grid) const {
    if (!flags().invariant_measure_known) throw InvalidArgument(name() + " has no single known invariant measure");
    std::vector<Point> pts;
    if (auto f = std::get_if<FiniteCycle>(&kind_)) {
        for (int j = 1; j <= f->period; ++j) pts.push_back(FinitePoint{j});
        return pts;
    }
    if (grid == 0) throw InvalidArgument("quadrature grid must be nonempty");
    pts.reserve(grid);
    const auto* conj = std::get_if<ConjugatedRotation>(&kind_);
    for (std::size_t j = 0; j < grid; ++j) {
        double u = (static_cast<double>(j) + 0.5) / static_cast<double>(grid);
        pts.push_back(CirclePoint{conj ? frac(conj->h(u)) : u});
    }
    return pts;
}

double DynSystem::integrate_invariant(const std::function<double(const Point&)>& f, std::size_t grid) const {
    auto pts = invariant_grid(grid);
    CompensatedSum s;
    for (const auto& p : pts) s.add(f(p));
    return s.value() / static_cast<double>(pts.size());
}

bool same_point(const Point& a, const Point& b, double tol) noexcept {
    if (a.index() != b.index()) return false;
    if (auto ea = std::get_if<ExactCirclePoint>(&a)) {
        const auto& eb = std::get<ExactCirclePoint>(b);
        return ea->offset == eb.offset && ea->alpha_multiple == eb.alpha_multiple;
    }
    if (auto fa = std::get_if<FinitePoint>(&a)) return fa->index == std::get<FinitePoint>(b).index;
    if (auto ca = std::get_if<CirclePoint>(&a)) return circle_distance(ca->x, std::get<CirclePoint>(b).x) <= tol;
    return std::abs(std::get<IntervalPoint>(a).x - std::get<IntervalPoint>(b).x) <= tol;
}

}  // namespace conflab
