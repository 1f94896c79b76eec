#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "conflab/conformal.hpp"

namespace conflab {

struct CocycleSolution {
    Point base;
    std::int64_t lo = 0, hi = 0;
    double beta = 0;
    std::vector<double> h;  // h(phi^k x) = beta S_k(F)(x), index k - lo; h(x) = 0
    double sup_abs = 0;
    double min = 0, max = 0;
    // log of the mean of e^{-h} over [-n, n] for n = hi/4, hi/2, hi (empty when the window is too short)
    std::vector<double> log_mean_exp_minus_h;
    double telescoping_residual = 0;

    double at(std::int64_t k) const { return h.at(static_cast<std::size_t>(k - lo)); }
};

CocycleSolution solve_cocycle(const DynSystem& s, PotentialPtr f, const Point& x, double beta, std::int64_t lo, std::int64_t hi);
CocycleSolution solve_cocycle(const OrbitSumTable& t);

enum class MeasureType { I_p, I_infinity, II_1, II_inf_or_III };
const char* to_string(MeasureType t) noexcept;

struct ClassifyThresholds {
    double cyclic_defect = 1e-10;
    double delta = 1e-6;          // positivity threshold for the Cesaro weight liminf
    double keep_fraction = 0.75;  // last doubling must keep this share of the previous estimate
};

struct CesaroWeightPoint {
    std::int64_t horizon = 0;
    double liminf_estimate = 0;  // min over n in [H/2, H] of (1/n) sum_{j=1}^n e^{beta S_j}
};

struct TypeVerdict {
    MeasureType label = MeasureType::II_inf_or_III;
    std::int64_t period = 0;  // I_p only
    std::int64_t horizon = 0;
    ClassifyThresholds thresholds;
    std::optional<double> cyclic_defect;
    std::optional<TailFit> summability_forward, summability_backward;
    bool summable = false;
    std::vector<CesaroWeightPoint> cesaro;  // worst sample point when several are used
    std::optional<CocycleSolution> cocycle;
    std::string factor_label;
};

// Measure type by atomicity, summability of e^{beta S_k} and the Cesaro weight condition.
TypeVerdict classify_measure(const Measure& m, const DynSystem& s, PotentialPtr f, double beta, std::int64_t horizon,
                             const ClassifyThresholds& th = {});

struct InvariantMeasureEstimate {
    std::vector<std::int64_t> index;  // orbit index k of each atom
    std::vector<double> log_weight;   // log(w_k) - h(phi^k x), unnormalized
    double total_mass = 0;
    std::vector<std::pair<std::int64_t, double>> mass_trend;  // (half-width, nu([-n, n]))
    double density = 0;           // nu([-n, n]) / (2n + 1) at the largest n
    bool finite_mass = false;     // last doubling grew the mass by at most 25%
    double invariance_residual = 0;  // |nu(f) - nu(f o phi)| / nu(X), worst test function
};

InvariantMeasureEstimate invariant_from_cocycle(const WeightedAtomicMeasure& m, const CocycleSolution& sol,
                                                const DynSystem& s);

std::string factor_report(const TypeVerdict& v);

}  // namespace conflab
