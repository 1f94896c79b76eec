#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "conflab/certificate.hpp"
#include "conflab/dynsys.hpp"

namespace conflab {

// J_p = (-inf, beta] when closed, (-inf, beta) otherwise.
struct SpectrumTarget {
    double beta;
    bool closed;
};

struct AppendixAOptions {
    int depth = 3;
    std::int64_t horizon = 10000;        // orbit-disjointness validation
    double onset = 64.0;                 // index shift s in c_n = g(n+s)/g(s), d_n = (1+s)/(n+1+s)
    std::int64_t verify_window = 1000;   // windowed checks of (a_n), (b_n)
    std::int64_t search_limit = 4000000; // largest index scanned for N_n
    std::int64_t exact_window_cap = 2000000;
};

// The two arcs of W_n^p: V_n^p around phi^n(x_p) and phi^{-2n-1}(V_n^p) around phi^{-n-1}(x_p).
struct ArcPair {
    double center_plus = 0;
    double center_minus = 0;
    double radius = 0;
    double tent_half_width = 0;
    double height = 0;
};

struct SandwichReport {
    int point = 0;
    std::int64_t m_max = 0;
    bool forward_holds = true;
    bool backward_holds = true;
    double worst_forward_margin = 0;  // min over m of distance to the nearer bound (negative = violated)
    double worst_backward_margin = 0;
    std::int64_t worst_forward_m = 0;
    std::int64_t worst_backward_m = 0;
    bool used_completed_values = true;
};

class AppendixAPotential {
public:
    static std::shared_ptr<const AppendixAPotential> build(const DynSystem& rotation, std::vector<double> base_points,
                                                           std::vector<SpectrumTarget> targets,
                                                           const AppendixAOptions& options = {});

    // Truncated potential F_d = sum_{n <= d} f_n.
    double eval(double x) const;
    double level_eval(int n, double x) const;

    const DynSystem& system() const noexcept { return system_; }
    int depth() const noexcept { return options_.depth; }
    const AppendixAOptions& options() const noexcept { return options_; }
    int point_count() const noexcept { return static_cast<int>(points_.size()); }
    const std::vector<double>& base_points() const noexcept { return points_; }
    const std::vector<SpectrumTarget>& targets() const noexcept { return targets_; }

    // Sequences; p is the 0-based base point index.
    double c(std::int64_t n) const;
    double d(std::int64_t n) const;
    double t(std::int64_t n) const;
    double a(int p, std::int64_t i) const;
    double b(int p, std::int64_t i) const;
    double S(std::int64_t i) const;

    // N_0..N_{depth+1}; the last one may be a lower bound (see n_capped).
    std::int64_t N(int n) const { return N_.at(static_cast<std::size_t>(n)); }
    bool last_N_capped() const noexcept { return last_capped_; }
    const ArcPair& arcs(int n, int p) const { return arcs_.at(static_cast<std::size_t>(n)).at(static_cast<std::size_t>(p)); }

    // |k| <= exact_window: completed_value(p, k) is F(phi^k x_p) for the untruncated F.
    std::int64_t exact_window() const noexcept { return exact_window_; }
    std::optional<int> base_point_index(double x) const;
    double completed_value(int p, std::int64_t k) const;

    // S_{d+1} + 2^{-d+1}
    double tail_bound() const;

    const std::vector<ConditionCheck>& certificate() const noexcept { return certificate_; }
    bool certified() const;

    // Forward and backward sandwich bounds along the orbit of x_p for m = 1..m_max.
    SandwichReport sandwich(int p, std::int64_t m_max) const;

private:
    AppendixAPotential(DynSystem s, std::vector<double> points, std::vector<SpectrumTarget> targets, AppendixAOptions o)
        : system_(std::move(s)), points_(std::move(points)), targets_(std::move(targets)), options_(o) {}

    void validate_orbits() const;
    void choose_N();
    void build_arcs();
    void verify();

    DynSystem system_;
    std::vector<double> points_;
    std::vector<SpectrumTarget> targets_;
    AppendixAOptions options_;
    std::vector<std::int64_t> N_;
    bool last_capped_ = false;
    std::int64_t exact_window_ = 0;
    std::vector<std::vector<ArcPair>> arcs_;
    std::vector<ConditionCheck> certificate_;
};

}  // namespace conflab
