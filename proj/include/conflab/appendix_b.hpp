#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "conflab/certificate.hpp"
#include "conflab/continued_fraction.hpp"
#include "conflab/dynsys.hpp"

namespace conflab {

struct AppendixBLevel {
    int k = 0;
    BigInt p;  // approximant p_k/q_k
    BigInt q;
    std::int64_t n = 0;     // return time n_k
    Rational epsilon;       // eps_k
    double height = 0;      // 2^{k+1}
    double half_width = 0;  // 1/(k 2^k q_k)
    double slope = 0;       // L_k = k 2^{2k+1} q_k
    std::vector<BigInt> r;  // r(k)_i for i = 2..k
};

// F_K(x) = sum_{k <= K} omega_k(x) - omega_k(x + alpha), with sawtooth omega_k of
// q_k teeth centred at j/q_k.
class AppendixBPotential {
public:
    static std::shared_ptr<const AppendixBPotential> build(const ContinuedFraction& alpha, int K,
                                                           PrecisionMode mode = PrecisionMode::floating,
                                                           std::size_t certificate_grid = 10000);

    double eval(double x) const;
    double eval(const ExactCirclePoint& x) const;
    double omega(int k, double x) const;
    HighFloat omega_hp(int k, const HighFloat& x) const;
    // v_K = sum_{k <= K} omega_k, with F_K = v_K - v_K o phi.
    double transfer(double x) const;

    int depth() const noexcept { return static_cast<int>(levels_.size()); }
    PrecisionMode mode() const noexcept { return mode_; }
    const ContinuedFraction& alpha() const noexcept { return alpha_; }
    DynSystem system() const { return DynSystem::rotation(alpha_); }
    const std::vector<AppendixBLevel>& levels() const noexcept { return levels_; }
    const AppendixBLevel& level(int k) const { return levels_.at(static_cast<std::size_t>(k - 1)); }
    std::vector<std::int64_t> return_times() const;

    // sum_{l > K} 1/l^2: bounds |F - F_K| uniformly and the defect of the n_k return sums.
    double tail_bound() const;
    double return_sum_tail_bound() const { return tail_bound(); }
    // sum_{l <= K} 1/l^2, the bound for |sum_{i < n_k} F_K(x + i alpha)|.
    double return_sum_bound() const;

    // Closed forms from the tooth geometry.
    Rational omega_integral(int k) const;
    Rational support_measure(int k) const;

    // sup over a midpoint grid of |sum_{i < n_k} F_K(x + i alpha)|, summed term by term.
    double max_return_sum(int k, std::size_t grid) const;
    // Midpoint rule for the integral of F_K.
    double quadrature(std::size_t grid) const;

    const std::vector<ConditionCheck>& certificate() const noexcept { return certificate_; }
    bool certified() const;

private:
    AppendixBPotential(ContinuedFraction a, PrecisionMode m) : alpha_(std::move(a)), mode_(m) {}
    void certify(std::size_t grid);
    double shifted_sum(double x, std::int64_t n) const;

    ContinuedFraction alpha_;
    PrecisionMode mode_;
    std::vector<AppendixBLevel> levels_;
    std::vector<ConditionCheck> certificate_;
};

}  // namespace conflab
