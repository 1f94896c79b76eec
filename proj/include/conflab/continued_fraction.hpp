#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "conflab/numeric.hpp"

namespace conflab {

struct Convergent {
    BigInt p;
    BigInt q;
};

// An irrational number in (0,1) given by an eventually periodic expansion
// [0; prefix..., (period)...]. Eventually periodic expansions are exactly
// the quadratic irrationals, so irrationality is part of the declaration.
class ContinuedFraction {
public:
    ContinuedFraction(std::vector<std::int64_t> prefix, std::vector<std::int64_t> period, std::string name = {});

    static ContinuedFraction golden();  // (sqrt 5 - 1)/2 = [0; 1, 1, ...]
    static ContinuedFraction silver();  // sqrt 2 - 1 = [0; 2, 2, ...]
    static ContinuedFraction named(const std::string& name);

    // A terminating expansion is rational and is refused.
    [[noreturn]] static ContinuedFraction finite(const std::vector<std::int64_t>& quotients);

    // a_i for i >= 1 (a_0 = 0).
    std::int64_t partial_quotient(std::size_t i) const;

    // p_i/q_i for i = 0..count-1, starting at 0/1.
    std::vector<Convergent> convergents(std::size_t count) const;
    // All convergents up to the first one with q >= bound.
    std::vector<Convergent> convergents_until(const BigInt& bound) const;

    double value() const noexcept { return value_; }
    long double value_ld() const noexcept { return value_ld_; }
    const HighFloat& value_hp() const noexcept { return value_hp_; }

    const std::string& name() const noexcept { return name_; }
    const std::vector<std::int64_t>& prefix() const noexcept { return prefix_; }
    const std::vector<std::int64_t>& period() const noexcept { return period_; }

private:
    std::vector<std::int64_t> prefix_;
    std::vector<std::int64_t> period_;
    std::string name_;
    double value_ = 0;
    long double value_ld_ = 0;
    HighFloat value_hp_;
};

}  // namespace conflab
