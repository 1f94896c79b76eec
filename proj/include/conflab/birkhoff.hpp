#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "conflab/dynsys.hpp"
#include "conflab/potential.hpp"

namespace conflab {

// S_k(F)(x): sum_{j<k} F(phi^j x) for k > 0, 0 for k = 0, -sum_{j=1}^{|k|} F(phi^{-j} x) for k < 0.
double birkhoff_sum(const DynSystem& s, const Potential& f, const Point& x, std::int64_t k);

// Cached S_k(F)(x) with F known on orbit points k in [-N, M], hence S_k for k in [-N, M+1].
class OrbitSumTable {
public:
    static OrbitSumTable build(const DynSystem& s, PotentialPtr f, const Point& x, double beta, std::int64_t n_back,
                               std::int64_t m_fwd);
    // New table over [-N', M'] reusing every cached value.
    OrbitSumTable extend(std::int64_t n_back, std::int64_t m_fwd) const;
    // Same sums, different inverse temperature (S_k does not depend on beta).
    OrbitSumTable with_beta(double beta) const;

    double beta() const noexcept { return beta_; }
    std::int64_t back() const noexcept { return d_->n_back; }
    std::int64_t fwd() const noexcept { return d_->m_fwd; }
    const DynSystem& system() const noexcept { return d_->system; }
    const PotentialPtr& potential() const noexcept { return d_->potential; }
    const Point& base() const noexcept { return d_->x; }
    std::optional<std::int64_t> exact_window() const noexcept { return d_->exact_window; }

    double S(std::int64_t k) const;  // k in [-N, M+1]
    double F(std::int64_t k) const;  // k in [-N, M]
    double beta_S(std::int64_t k) const { return beta_ * S(k); }
    std::vector<Point> points(std::int64_t lo, std::int64_t hi) const { return system().orbit_range(base(), lo, hi); }

    // max |S_{k+1} - S_k - F(phi^k x)| over the table
    double telescoping_residual() const;

private:
    struct Data {
        DynSystem system;
        PotentialPtr potential;
        Point x;
        std::int64_t n_back = 0, m_fwd = 0;
        std::vector<double> f;  // index k + n_back
        std::vector<double> s;  // index k + n_back, up to M+1
        std::optional<std::int64_t> exact_window;
    };
    OrbitSumTable(std::shared_ptr<const Data> d, double beta) : d_(std::move(d)), beta_(beta) {}
    static std::shared_ptr<Data> finish(std::shared_ptr<Data> d);

    std::shared_ptr<const Data> d_;
    double beta_ = 0;
};

struct CesaroStats {
    Direction side = Direction::forward;
    std::int64_t horizon = 0;
    double beta = 0;
    // forward: (1/k) sum_{i<k} beta F(phi^i x); backward: (1/k) sum_{i=1}^k -beta F(phi^{-i} x); k = 1..horizon
    std::vector<double> averages;
    double tail_max = 0;  // sup over k in [ceil(horizon/2), horizon]
};

CesaroStats cesaro_limsup_estimate(const OrbitSumTable& t, Direction side);
// Same statistic on the first `horizon` terms.
CesaroStats cesaro_limsup_estimate(const OrbitSumTable& t, Direction side, std::int64_t horizon);

// log sum_{k=lo}^{hi} e^{beta S_k}
double log_partition(const OrbitSumTable& t, std::int64_t lo, std::int64_t hi);

// max over 0 <= n <= M of |S_{n+1}|
double sup_partial_sums(const OrbitSumTable& t);
double sup_partial_sums(const OrbitSumTable& t, std::int64_t horizon);

}  // namespace conflab
