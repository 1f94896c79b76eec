#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "conflab/dynsys.hpp"
#include "conflab/potential.hpp"

namespace conflab {

struct TestFunction {
    std::string name;
    std::function<double(const Point&)> fn;
    double sup_norm = 1.0;
};

// Circle: 1, cos(2 pi j x), sin(2 pi j x) for j <= 4. Interval: 1 and x^j. Finite: indicators.
std::vector<TestFunction> standard_test_functions(const DynSystem& s);

struct Atom {
    Point point;
    double log_weight = 0;
    std::optional<std::int64_t> orbit_index;  // k when the atom is phi^k(base)
};

class WeightedAtomicMeasure {
public:
    WeightedAtomicMeasure() = default;
    // Normalizes the log-weights so the weights sum to one.
    static WeightedAtomicMeasure from_log_weights(std::vector<Atom> atoms, std::optional<Point> base = std::nullopt);
    // Atoms phi^k(x), k = lo..lo+size-1, with the given unnormalized log-weights.
    static WeightedAtomicMeasure on_orbit(const DynSystem& s, const Point& x, std::int64_t lo,
                                          const std::vector<double>& log_weights);

    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    double weight(std::size_t i) const;
    std::vector<double> weights() const;
    double log_normalizer() const noexcept { return log_normalizer_; }
    // Base point when every atom is an orbit point phi^k(base) with consecutive k.
    const std::optional<Point>& base() const noexcept { return base_; }
    std::optional<std::int64_t> first_index() const;
    std::optional<std::int64_t> last_index() const;

    double integrate(const std::function<double(const Point&)>& f) const;

private:
    std::vector<Atom> atoms_;
    std::optional<Point> base_;
    double log_normalizer_ = 0;
};

// Density against the invariant reference measure of a uniquely ergodic system,
// discretized on that measure's quadrature nodes.
class DensityMeasure {
public:
    static DensityMeasure build(const DynSystem& s, std::function<double(const Point&)> log_density, std::size_t grid,
                                std::string label);

    const std::vector<Point>& nodes() const noexcept { return nodes_; }
    // Normalized quadrature weights (density times reference weight).
    const std::vector<double>& node_weights() const noexcept { return weights_; }
    std::size_t grid() const noexcept { return nodes_.size(); }
    double log_normalizer() const noexcept { return log_normalizer_; }
    double density(const Point& x) const;
    const std::string& label() const noexcept { return label_; }
    const std::string& reference() const noexcept { return reference_; }

    double integrate(const std::function<double(const Point&)>& f) const;

private:
    std::vector<Point> nodes_;
    std::vector<double> weights_;
    std::function<double(const Point&)> log_density_;
    double log_normalizer_ = 0;
    std::string label_;
    std::string reference_;
};

using Measure = std::variant<WeightedAtomicMeasure, DensityMeasure>;

double integrate(const Measure& m, const std::function<double(const Point&)>& f);

struct Residual {
    std::string test;
    double value = 0;
};

// |int f dm - int f o phi e^{beta F} dm| per test function.
std::vector<Residual> conformality_residual(const Measure& m, const DynSystem& s, const Potential& f, double beta,
                                            const std::vector<TestFunction>& tests);
double max_residual(const std::vector<Residual>& r);

}  // namespace conflab
