#include "conflab/continued_fraction.hpp"

#include "conflab/errors.hpp"

namespace conflab {

ContinuedFraction::ContinuedFraction(std::vector<std::int64_t> prefix, std::vector<std::int64_t> period, std::string name)
    : prefix_(std::move(prefix)), period_(std::move(period)), name_(std::move(name)) {
    if (period_.empty())
        throw InvalidArgument("continued fraction without a period is rational; rotation number must be irrational");
    for (auto a : prefix_)
        if (a < 1) throw InvalidArgument("partial quotients must be positive integers");
    for (auto a : period_)
        if (a < 1) throw InvalidArgument("partial quotients must be positive integers");
    if (name_.empty()) {
        name_ = "[0;";
        for (auto a : prefix_) name_ += std::to_string(a) + ",";
        name_ += "(";
        for (std::size_t i = 0; i < period_.size(); ++i) name_ += (i ? "," : "") + std::to_string(period_[i]);
        name_ += ")]";
    }

    // Consecutive convergents bracket the value; stop once 1/q^2 is far below 50 digits.
    BigInt bound = BigInt(1) << 200;
    auto cs = convergents_until(bound);
    const auto& last = cs.back();
    value_hp_ = HighFloat(last.p) / HighFloat(last.q);
    value_ = static_cast<double>(value_hp_);
    value_ld_ = static_cast<long double>(value_hp_);
}

ContinuedFraction ContinuedFraction::golden() { return ContinuedFraction({}, {1}, "golden"); }

ContinuedFraction ContinuedFraction::silver() { return ContinuedFraction({}, {2}, "silver"); }

ContinuedFraction ContinuedFraction::named(const std::string& name) {
    if (name == "golden") return golden();
    if (name == "silver") return silver();
    throw InvalidArgument("unknown named rotation number '" + name + "' (known: golden, silver)");
}

ContinuedFraction ContinuedFraction::finite(const std::vector<std::int64_t>&) {
    throw InvalidArgument("terminating continued fraction declares a rational rotation number");
}

std::int64_t ContinuedFraction::partial_quotient(std::size_t i) const {
    if (i == 0) return 0;
    std::size_t j = i - 1;
    if (j < prefix_.size()) return prefix_[j];
    return period_[(j - prefix_.size()) % period_.size()];
}

std::vector<Convergent> ContinuedFraction::convergents(std::size_t count) const {
    std::vector<Convergent> out;
    BigInt p_prev = 1, q_prev = 0, p = 0, q = 1;
    for (std::size_t i = 0; i < count; ++i) {
        if (i > 0) {
            BigInt a = partial_quotient(i);
            BigInt pn = a * p + p_prev, qn = a * q + q_prev;
            p_prev = p;
            q_prev = q;
            p = pn;
            q = qn;
        }
        out.push_back({p, q});
    }
    return out;
}

std::vector<Convergent> ContinuedFraction::convergents_until(const BigInt& bound) const {
    std::vector<Convergent> out;
    BigInt p_prev = 1, q_prev = 0, p = 0, q = 1;
    out.push_back({p, q});
    for (std::size_t i = 1; q < bound; ++i) {
        BigInt a = partial_quotient(i);
        BigInt pn = a * p + p_prev, qn = a * q + q_prev;
        p_prev = p;
        q_prev = q;
        p = pn;
        q = qn;
        out.push_back({p, q});
    }
    return out;
}

}  // namespace conflab
