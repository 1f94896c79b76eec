#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "conflab/continued_fraction.hpp"
#include "conflab/numeric.hpp"

namespace conflab {

enum class Direction { forward, backward };
enum class SpaceKind { circle, interval, finite };

struct CirclePoint {
    double x;
};
struct IntervalPoint {
    double x;
};
struct FinitePoint {
    int index;  // 1..p
};
// x = offset + alpha_multiple * alpha (mod 1); rotation orbits stay exact.
struct ExactCirclePoint {
    Rational offset;
    std::int64_t alpha_multiple = 0;
};

using Point = std::variant<CirclePoint, IntervalPoint, FinitePoint, ExactCirclePoint>;

Point circle_point(double x);
Point interval_point(double x);
Point finite_point(int index);
Point exact_circle_point(Rational offset, std::int64_t alpha_multiple = 0);

SpaceKind space_of(const Point& x) noexcept;
const char* space_name(SpaceKind s) noexcept;

// min(|a-b| mod 1, 1 - (|a-b| mod 1))
double circle_distance(double a, double b) noexcept;

struct SystemFlags {
    bool minimal = false;
    bool uniquely_ergodic = false;
    bool invariant_measure_known = false;
};

using CircleMap = std::function<double(double)>;

class DynSystem {
public:
    struct Rotation {
        ContinuedFraction alpha;
    };
    struct FiniteCycle {
        int period;
    };
    struct SquaringMap {};
    // phi = h o R_alpha o h^{-1}
    struct ConjugatedRotation {
        ContinuedFraction alpha;
        CircleMap h;
        CircleMap h_inverse;
        std::string label;
    };
    using Kind = std::variant<Rotation, FiniteCycle, SquaringMap, ConjugatedRotation>;

    static DynSystem rotation(ContinuedFraction alpha);
    static DynSystem finite_cycle(int period);
    static DynSystem squaring_map();
    static DynSystem conjugated_rotation(ContinuedFraction alpha, CircleMap h, CircleMap h_inverse, std::string label);
    // h(x) = x + delta/(2 pi) sin(2 pi x), |delta| < 1, inverted by Newton's method.
    static DynSystem sine_conjugated_rotation(ContinuedFraction alpha, double delta);

    const Kind& kind() const noexcept { return kind_; }
    SpaceKind space() const noexcept;
    SystemFlags flags() const noexcept;
    std::string name() const;

    bool is_rotation() const noexcept { return std::holds_alternative<Rotation>(kind_); }
    bool is_finite() const noexcept { return std::holds_alternative<FiniteCycle>(kind_); }
    bool is_squaring() const noexcept { return std::holds_alternative<SquaringMap>(kind_); }
    // Rotation number of a (conjugated) rotation, sign-adjusted when reversed.
    std::optional<double> rotation_number() const;
    const ContinuedFraction* continued_fraction() const noexcept;
    int period() const;  // FiniteCycle only

    // phi^{-1} presented as a system in its own right.
    DynSystem reversed() const;
    bool is_reversed() const noexcept { return reversed_; }

    // Same map (kind, parameters and orientation).
    bool same_as(const DynSystem& other) const { return name() == other.name(); }

    bool contains(const Point& x) const noexcept;
    void require_member(const Point& x) const;

    Point step(const Point& x, Direction d = Direction::forward) const;
    Point iterate(const Point& x, std::int64_t k) const;
    // Element i is phi^{i - n_back}(x).
    std::vector<Point> orbit_segment(const Point& x, std::int64_t n_back, std::int64_t m_fwd) const;
    // phi^k(x) for k = lo..hi (lo <= hi, any signs).
    std::vector<Point> orbit_range(const Point& x, std::int64_t lo, std::int64_t hi) const;

    // Real coordinate (finite points: the index). Exact circle points evaluated with 50 digits.
    double coordinate(const Point& x) const;
    HighFloat coordinate_hp(const Point& x) const;

    // Minimal period if x is periodic with period <= max_period.
    std::optional<std::int64_t> minimal_period(const Point& x, std::int64_t max_period = 1 << 20) const;

    // Integral against the unique invariant probability measure (midpoint rule).
    double integrate_invariant(const std::function<double(const Point&)>& f, std::size_t grid = 1 << 14) const;
    // Points whose equal-weight average is that measure's quadrature.
    std::vector<Point> invariant_grid(std::size_t grid) const;

private:
    explicit DynSystem(Kind k) : kind_(std::move(k)) {}
    Point step_forward(const Point& x, bool forward) const;

    Kind kind_;
    bool reversed_ = false;
};

bool same_point(const Point& a, const Point& b, double tol = 0.0) noexcept;

}  // namespace conflab
