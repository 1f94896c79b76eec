#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "conflab/conformal.hpp"

namespace conflab {

enum class Evidence { inner, not_inner, inconclusive, inapplicable };
const char* to_string(Evidence e) noexcept;

struct SupPoint {
    std::int64_t horizon = 0;
    double sup = 0;  // max over seeds and n < horizon of |S_{n+1}|
};

struct FlowPropertyReport {
    std::string test;
    std::string verdict;
    std::string method;
    bool certified = false;  // only exact Fourier solves certify
    std::vector<SupPoint> sups;
    std::optional<LineFit> growth;  // sup against horizon
    std::vector<double> integrals;  // invariant-measure integrals of F used by the verdict
    double tol = 0;
    std::vector<std::string> notes;
};

struct InnernessResult {
    Evidence evidence = Evidence::inconclusive;
    FlowPropertyReport report;
};

// Gottschalk-Hedlund on minimal systems: bounded orbit sums give a continuous transfer function.
InnernessResult innerness_test(const DynSystem& s, PotentialPtr f, const std::vector<Point>& seeds, std::int64_t horizon,
                               double tol = 1e-3);

struct ApproxInnerResult {
    bool approximately_inner = false;
    FlowPropertyReport report;
};

// int F dnu = 0 for every invariant probability nu.
ApproxInnerResult approx_inner_test(const DynSystem& s, PotentialPtr f, double tol = 1e-6,
                                    const std::vector<Point>& seeds = {}, std::int64_t horizon = 100000);

struct DefectPoint {
    std::int64_t n = 0;
    double defect = 0;  // sup over the grid of |(1/n) sum_{i=1}^n F o phi^i|
};

struct DefectReport {
    std::vector<DefectPoint> points;
    bool majorant_decreasing = false;  // max over later n never exceeds an earlier value
    std::size_t grid = 0;
};

// ||h_n o phi - h_n - F|| through the averaging identity, never forming h_n.
DefectReport hn_defect(const DynSystem& s, PotentialPtr f, const std::vector<std::int64_t>& n_list, std::size_t grid = 1 << 12);

// h_n(y) = -(1/n) sum_{j=1}^n S_j(F)(y), for checking the identity directly.
double hn_value(const DynSystem& s, const Potential& f, const Point& y, std::int64_t n);

}  // namespace conflab
