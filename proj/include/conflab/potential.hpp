#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "conflab/dynsys.hpp"

namespace conflab {

class AppendixAPotential;
class AppendixBPotential;
class Potential;
using PotentialPtr = std::shared_ptr<const Potential>;

// Real trigonometric polynomial sum_n c_n e^{2 pi i n x} with c_{-n} = conj(c_n).
class TrigPoly {
public:
    TrigPoly() = default;
    explicit TrigPoly(std::map<int, std::complex<double>> coefficients);

    // a cos(2 pi n x) + b sin(2 pi n x)
    static TrigPoly cos_sin(int n, double a, double b);
    static TrigPoly cosine(int n, double amplitude = 1.0) { return cos_sin(n, amplitude, 0.0); }
    static TrigPoly sine(int n, double amplitude = 1.0) { return cos_sin(n, 0.0, amplitude); }

    double eval(double x) const;
    std::complex<double> coefficient(int n) const;
    double mean() const { return coefficient(0).real(); }
    // sum |c_n|, an upper bound for the sup norm.
    double coefficient_l1() const;
    const std::map<int, std::complex<double>>& coefficients() const noexcept { return coefficients_; }

    TrigPoly operator+(const TrigPoly& other) const;
    TrigPoly scaled(double s) const;

private:
    std::map<int, std::complex<double>> coefficients_;
};

struct NoSolution {
    std::string reason;
    double mean = 0.0;
};

struct OrbitValues {
    // values[i] = F(phi^{lo + i} x)
    std::vector<double> values;
    std::int64_t lo = 0;
    // Indices |k| <= exact_window carry the untruncated potential's values.
    std::optional<std::int64_t> exact_window;
};

class Potential {
public:
    struct Constant {
        double value;
    };
    struct Trig {
        TrigPoly poly;
    };
    // Polynomial in the real coordinate (interval or circle coordinate in [0,1)).
    struct Polynomial {
        std::vector<double> coefficients;  // c_0 + c_1 x + ...
    };
    // Values F(1..p) on a finite cycle.
    struct Table {
        std::vector<double> values;
    };
    // H o phi - H
    struct Coboundary {
        PotentialPtr transfer;
        DynSystem system;
    };
    // F o phi^shift
    struct Shifted {
        PotentialPtr base;
        DynSystem system;
        std::int64_t shift;
    };
    struct Sum {
        std::vector<std::pair<double, PotentialPtr>> terms;
    };
    struct AppendixA {
        std::shared_ptr<const AppendixAPotential> construction;
    };
    struct AppendixB {
        std::shared_ptr<const AppendixBPotential> construction;
    };
    struct Function {
        std::function<double(const Point&)> fn;
        std::string label;
    };
    using Kind = std::variant<Constant, Trig, Polynomial, Table, Coboundary, Shifted, Sum, AppendixA, AppendixB, Function>;

    explicit Potential(Kind k);

    static PotentialPtr constant(double c);
    static PotentialPtr trig(TrigPoly p);
    static PotentialPtr polynomial(std::vector<double> coefficients);
    static PotentialPtr table(std::vector<double> values);
    static PotentialPtr coboundary(PotentialPtr transfer, DynSystem system);
    static PotentialPtr shifted(PotentialPtr base, DynSystem system, std::int64_t shift);
    static PotentialPtr sum(std::vector<std::pair<double, PotentialPtr>> terms);
    static PotentialPtr negated(PotentialPtr f) { return sum({{-1.0, std::move(f)}}); }
    static PotentialPtr appendix_a(std::shared_ptr<const AppendixAPotential> c);
    static PotentialPtr appendix_b(std::shared_ptr<const AppendixBPotential> c);
    static PotentialPtr function(std::function<double(const Point&)> fn, std::string label);
    // The potential -F o phi^{-1} that pairs with phi^{-1} (time reversal).
    static PotentialPtr time_reversed(PotentialPtr f, const DynSystem& s);

    const Kind& kind() const noexcept { return kind_; }
    std::string kind_name() const;

    double eval(const Point& x) const;
    double operator()(const Point& x) const { return eval(x); }

    // Uniform bound on |F - F_truncated|; 0 for exact kinds.
    double tail_bound() const;

    // F along an orbit window. appendix_a values on base-point orbits are completed
    // beyond the truncation depth where that is exact.
    OrbitValues orbit_values(const DynSystem& s, const Point& x, std::int64_t lo, std::int64_t hi) const;

    // Integral against the invariant measure(s) of s when it is known in closed form.
    std::optional<double> known_invariant_mean(const DynSystem& s) const;

    std::optional<TrigPoly> as_trig() const;

private:
    Kind kind_;
};

// h with h o phi - h = F for a rotation phi, by dividing Fourier coefficients.
std::variant<TrigPoly, NoSolution> solve_coboundary_fourier(const TrigPoly& f, const DynSystem& rotation);

// sup over a uniform grid of |h(x + alpha) - h(x) - F(x)|
double coboundary_grid_residual(const TrigPoly& h, const TrigPoly& f, const DynSystem& rotation, std::size_t grid = 1 << 12);

double truncation_tail_bound(const Potential& f);

}  // namespace conflab
