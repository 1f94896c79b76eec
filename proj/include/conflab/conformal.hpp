#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "conflab/birkhoff.hpp"
#include "conflab/measure.hpp"

namespace conflab {

enum class Verdict { holds, fails, inconclusive };
const char* to_string(Verdict v) noexcept;

struct TailPoint {
    std::int64_t horizon = 0;
    double forward = 0;
    double backward = 0;
};

struct ExistenceResult {
    Verdict verdict = Verdict::inconclusive;
    double beta = 0;
    double tol = 0;
    CesaroStats forward, backward;  // at the final horizon
    std::vector<TailPoint> history;  // horizons H/4, H/2, H
};

// Forward and backward limsup conditions of the existence theorem, judged on horizon doublings.
ExistenceResult existence_check(const DynSystem& s, PotentialPtr f, const Point& x, double beta, std::int64_t horizon,
                                double tol);
ExistenceResult existence_check(const OrbitSumTable& t, std::int64_t horizon, double tol);

enum class SpectrumClass { ZeroOnly, NonnegRay, NonposRay, FullLine };
const char* to_string(SpectrumClass c) noexcept;

struct BetaEvidence {
    double beta = 0;
    Verdict verdict = Verdict::inconclusive;
    double tail_max_forward = 0;  // from the seed that decided the verdict
    double tail_max_backward = 0;
    std::int64_t horizon = 0;
    int seed = -1;
};

struct SpectrumVerdict {
    SpectrumClass classification = SpectrumClass::ZeroOnly;
    double mismatch = 0;  // inconclusive counts one half
    std::vector<BetaEvidence> evidence;
    std::int64_t horizon = 0;
    double tol = 0;
    bool minimal = false;
    std::optional<double> invariant_mean;  // uniquely ergodic systems only
    std::vector<std::string> notes;
};

SpectrumVerdict spectrum_scan(const DynSystem& s, PotentialPtr f, const std::vector<double>& beta_grid,
                              const std::vector<Point>& seeds, std::int64_t horizon, double tol, unsigned threads = 1);

struct WindowStep {
    std::int64_t horizon = 0;
    std::int64_t n = 0;  // atoms phi^k(x), k in [-n, m-1]
    std::int64_t m = 0;
    double ratio = 0;    // (e^{beta S_-n} + e^{beta S_m}) / sum_{k=-n}^{m-1} e^{beta S_k}
    std::string method;  // "period", "record-minima" or "greedy"
};

struct ConformalReport {
    Measure measure;
    std::vector<WindowStep> schedule;
    WindowStep chosen;
    bool converged = false;
    double ratio_tol = 0;
    std::vector<Residual> residuals;
};

ConformalReport hopf_construct(const DynSystem& s, PotentialPtr f, const Point& x, double beta, double ratio_tol,
                               std::int64_t max_horizon, const std::vector<TestFunction>& tests);

// Weights proportional to e^{beta S_j(F)(x)}, j = 0..p-1, on an F-cyclic periodic orbit.
WeightedAtomicMeasure atomic_periodic(const DynSystem& s, const Potential& f, const Point& x, std::int64_t p, double beta);

struct TailFit {
    LineFit fit;      // log of the decreasing majorant of e^{beta S_k} against log |k|
    LineFit log_fit;  // log(|k| * majorant) against log log |k|
    std::int64_t from = 0, to = 0;
    bool decays_summably = false;  // log_fit slope + 3 stderr < -1
};

struct SummableMeasure {
    WeightedAtomicMeasure measure;
    TailFit forward, backward;
    double tail_mass = 0;  // fitted mass beyond [-N, N] relative to the window mass
    std::int64_t N = 0;
};

struct Divergent {
    std::string reason;
    TailFit forward, backward;
    double log_partition = 0;
    std::int64_t N = 0;
};

std::variant<SummableMeasure, Divergent> atomic_summable(const DynSystem& s, PotentialPtr f, const Point& x, double beta,
                                                          std::int64_t N);
std::variant<SummableMeasure, Divergent> atomic_summable(const OrbitSumTable& t, std::int64_t N);

// e^{beta H} d(lambda) / Z: the conformal measure for F = H o phi - H built from the invariant measure.
DensityMeasure coboundary_conformal_density(PotentialPtr h, const DynSystem& s, double beta, std::size_t grid = 1 << 14);

struct InvariantBracket {
    double mean_plus = 0;
    double mean_minus = 0;
    double weight = 0;  // weight * mean_plus + (1 - weight) * mean_minus = 0
    int seed_plus = -1, seed_minus = -1;
    std::vector<double> seed_means;
};

InvariantBracket invariant_bracket(const DynSystem& s, PotentialPtr f, const std::vector<Point>& seeds, std::int64_t horizon,
                                   double tol = 1e-3);

}  // namespace conflab
