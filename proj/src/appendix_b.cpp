#include "conflab/appendix_b.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "conflab/errors.hpp"

namespace conflab {

namespace {

HighFloat to_hp(const Rational& r) { return HighFloat(numerator(r)) / HighFloat(denominator(r)); }

BigInt pow2(int e) { return BigInt(1) << e; }

std::string str(const BigInt& v) { return v.str(); }

// Smallest n > n_prev (n >= 2) with frac(n alpha) <= eps.
std::int64_t next_return_time(const ContinuedFraction& alpha, std::int64_t n_prev, const Rational& eps) {
    const HighFloat eps_hp = to_hp(eps);
    const HighFloat a = alpha.value_hp();
    BigInt candidate = -1;
    for (const auto& c : alpha.convergents_until(BigInt(1) << 120)) {
        if (c.q <= n_prev || c.q < 2) continue;
        HighFloat err = HighFloat(c.q) * a - HighFloat(c.p);
        if (err > 0 && err <= eps_hp) {
            candidate = c.q;
            break;
        }
    }
    if (candidate < 0) throw Error("no convergent return time found for eps = " + to_hp(eps).str(10));
    if (candidate > BigInt(4000000000LL))
        throw InvalidArgument("return time " + str(candidate) + " is beyond the supported search range");
    const std::int64_t cand = static_cast<std::int64_t>(candidate);
    const long double a_ld = alpha.value_ld();
    const long double eps_ld = static_cast<long double>(eps_hp);
    for (std::int64_t n = std::max<std::int64_t>(n_prev + 1, 2); n < cand; ++n) {
        long double f = frac(static_cast<long double>(n) * a_ld);
        if (f <= eps_ld * (1.0L + 1e-9L) && frac(HighFloat(n) * a) <= eps_hp) return n;
    }
    return cand;
}

}  // namespace

std::shared_ptr<const AppendixBPotential> AppendixBPotential::build(const ContinuedFraction& alpha, int K, PrecisionMode mode,
                                                                    std::size_t certificate_grid) {
    // Level 3 already fails the float guard, so deeper requests in float mode are a precision problem first.
    if (K > 3 && mode == PrecisionMode::floating)
        throw PrecisionError("precision: appendix_b depth " + std::to_string(K) + " exceeds what double arithmetic resolves");
    if (K < 1 || K > 3) throw InvalidArgument("appendix_b depth K must be 1, 2 or 3");
    std::shared_ptr<AppendixBPotential> f(new AppendixBPotential(alpha, mode));
    const HighFloat a = alpha.value_hp();

    Rational eps_prev = 1;
    std::int64_t n_prev = 1;
    BigInt product = 1;
    for (int k = 1; k <= K; ++k) {
        AppendixBLevel lv;
        lv.k = k;
        lv.n = k == 1 ? 1 : next_return_time(alpha, n_prev, eps_prev);
        if (k > 1) product *= lv.n;
        const BigInt scale = BigInt(k) * k * k * pow2(2 * k + 1);
        const BigInt threshold = scale * product;
        bool found = false;
        for (const auto& c : alpha.convergents_until(threshold * 4)) {
            if (c.q < threshold) continue;
            HighFloat err = abs(a - HighFloat(c.p) / HighFloat(c.q));
            if (err <= 1 / (HighFloat(threshold) * HighFloat(c.q))) {
                lv.p = c.p;
                lv.q = c.q;
                found = true;
                break;
            }
        }
        if (!found) throw Error("no approximant found at level " + std::to_string(k));

        const BigInt L = BigInt(k) * pow2(2 * k + 1) * lv.q;
        lv.slope = static_cast<double>(L);
        lv.height = std::ldexp(1.0, k + 1);
        lv.half_width = 1.0 / (static_cast<double>(k) * std::ldexp(1.0, k) * static_cast<double>(lv.q));
        if (mode == PrecisionMode::floating && lv.slope * DBL_EPSILON > 1e-6) {
            std::ostringstream os;
            os << "precision: level " << k << " has Lipschitz constant " << lv.slope
               << "; double coordinates cannot resolve its teeth, use exact mode";
            throw PrecisionError(os.str());
        }
        Rational lip_eps(BigInt(1), BigInt(k) * k * L);
        lv.epsilon = std::min(eps_prev, lip_eps);
        for (int i = 2; i <= k; ++i) {
            std::int64_t ni = i == k ? lv.n : f->levels_[static_cast<std::size_t>(i - 1)].n;
            HighFloat pos = frac(HighFloat(ni) * a) * HighFloat(lv.q);
            lv.r.push_back(boost::multiprecision::round(pos).convert_to<BigInt>());
        }
        eps_prev = lv.epsilon;
        n_prev = lv.n;
        f->levels_.push_back(std::move(lv));
    }
    f->certify(certificate_grid);
    return f;
}

double AppendixBPotential::omega(int k, double x) const {
    if (mode_ == PrecisionMode::exact) return static_cast<double>(omega_hp(k, HighFloat(x)));
    const auto& lv = level(k);
    double y = frac(x) * static_cast<double>(lv.q);
    double t = std::abs(y - std::nearbyint(y)) * k * std::ldexp(1.0, k);
    return t >= 1.0 ? 0.0 : lv.height * (1.0 - t);
}

HighFloat AppendixBPotential::omega_hp(int k, const HighFloat& x) const {
    const auto& lv = level(k);
    HighFloat y = frac(x) * HighFloat(lv.q);
    HighFloat t = abs(y - boost::multiprecision::round(y)) * k * std::ldexp(1.0, k);
    if (t >= 1) return HighFloat(0);
    return HighFloat(lv.height) * (1 - t);
}

double AppendixBPotential::eval(double x) const {
    if (mode_ == PrecisionMode::exact) {
        HighFloat xh(x), x1 = frac(HighFloat(x) + alpha_.value_hp());
        HighFloat v = 0;
        for (int k = 1; k <= depth(); ++k) v += omega_hp(k, xh) - omega_hp(k, x1);
        return static_cast<double>(v);
    }
    double x1 = frac(x + alpha_.value());
    double v = 0;
    for (int k = 1; k <= depth(); ++k) v += omega(k, x) - omega(k, x1);
    return v;
}

double AppendixBPotential::eval(const ExactCirclePoint& x) const {
    HighFloat off = to_hp(x.offset);
    HighFloat x0 = frac(off + HighFloat(x.alpha_multiple) * alpha_.value_hp());
    HighFloat x1 = frac(x0 + alpha_.value_hp());
    HighFloat v = 0;
    for (int k = 1; k <= depth(); ++k) v += omega_hp(k, x0) - omega_hp(k, x1);
    return static_cast<double>(v);
}

double AppendixBPotential::transfer(double x) const {
    double v = 0;
    for (int k = 1; k <= depth(); ++k) v += omega(k, x);
    return v;
}

std::vector<std::int64_t> AppendixBPotential::return_times() const {
    std::vector<std::int64_t> out;
    for (const auto& lv : levels_) out.push_back(lv.n);
    return out;
}

double AppendixBPotential::tail_bound() const {
    // pi^2/6 - sum_{l <= K} 1/l^2
    return std::numbers::pi * std::numbers::pi / 6.0 - return_sum_bound();
}

double AppendixBPotential::return_sum_bound() const {
    double s = 0;
    for (int l = 1; l <= depth(); ++l) s += 1.0 / (static_cast<double>(l) * l);
    return s;
}

Rational AppendixBPotential::omega_integral(int k) const {
    const auto& lv = level(k);
    // q teeth, each a triangle of height 2^{k+1} and half-width 1/(k 2^k q)
    Rational hw(BigInt(1), BigInt(k) * pow2(k) * lv.q);
    return Rational(lv.q) * Rational(pow2(k + 1)) * hw;
}

Rational AppendixBPotential::support_measure(int k) const {
    const auto& lv = level(k);
    return Rational(lv.q) * 2 * Rational(BigInt(1), BigInt(k) * pow2(k) * lv.q);
}

double AppendixBPotential::shifted_sum(double x, std::int64_t n) const {
    CompensatedSum s;
    const long double a = alpha_.value_ld();
    for (std::int64_t i = 0; i < n; ++i) s.add(eval(static_cast<double>(frac(static_cast<long double>(x) + i * a))));
    return s.value();
}

double AppendixBPotential::max_return_sum(int k, std::size_t grid) const {
    const std::int64_t n = level(k).n;
    double worst = 0;
    for (std::size_t j = 0; j < grid; ++j) {
        double x = (static_cast<double>(j) + 0.5) / static_cast<double>(grid);
        worst = std::max(worst, std::abs(shifted_sum(x, n)));
    }
    return worst;
}

double AppendixBPotential::quadrature(std::size_t grid) const {
    CompensatedSum s;
    for (std::size_t j = 0; j < grid; ++j) s.add(eval((static_cast<double>(j) + 0.5) / static_cast<double>(grid)));
    return s.value() / static_cast<double>(grid);
}

void AppendixBPotential::certify(std::size_t grid) {
    const HighFloat a = alpha_.value_hp();
    auto add = [this](std::string name, double margin, std::string detail) {
        certificate_.push_back({std::move(name), margin > 0, margin, std::move(detail)});
    };
    BigInt product = 1;
    for (int k = 1; k <= depth(); ++k) {
        const auto& lv = level(k);
        const std::string tag = " k=" + std::to_string(k);
        if (k > 1) product *= lv.n;
        const BigInt scale = BigInt(k) * k * k * pow2(2 * k + 1);
        HighFloat err = abs(a - HighFloat(lv.p) / HighFloat(lv.q));
        add("a) approximant with return-time product" + tag,
            static_cast<double>((1 / (HighFloat(scale * product) * HighFloat(lv.q)) - err) * HighFloat(lv.q) * HighFloat(lv.q)),
            lv.p.str() + "/" + lv.q.str() + ", margin in units of 1/q^2");
        HighFloat bound = 1 / (HighFloat(scale) * HighFloat(lv.q));
        add("a) approximant" + tag, static_cast<double>((bound - err) / bound), "relative margin");
        for (int i = 2; i <= k; ++i) {
            std::int64_t ni = level(i).n;
            HighFloat e = abs(frac(HighFloat(ni) * a) - HighFloat(lv.r[static_cast<std::size_t>(i - 2)]) / HighFloat(lv.q));
            add("a) return point i=" + std::to_string(i) + tag, static_cast<double>((bound - e) / bound),
                "r = " + lv.r[static_cast<std::size_t>(i - 2)].str() + ", relative margin");
        }
        add("b) integral = 2/k" + tag, omega_integral(k) == Rational(2, k) ? 1.0 : -1.0, "closed form");
        add("d) support measure" + tag, support_measure(k) == Rational(BigInt(2), BigInt(k) * pow2(k)) ? 1.0 : -1.0,
            "closed form");
        Rational lipschitz = Rational(BigInt(k) * pow2(2 * k + 1) * lv.q);
        Rational slope = Rational(pow2(k + 1)) / Rational(BigInt(1), BigInt(k) * pow2(k) * lv.q);
        add("e) Lipschitz constant" + tag, slope == lipschitz ? 1.0 : -1.0, "tooth slope equals k 2^{2k+1} q_k");

        double periodic = 0, lip = 0;
        const HighFloat inv_q = 1 / HighFloat(lv.q);
        const HighFloat h = HighFloat(lv.half_width) * 0.013;
        for (int j = 0; j < 512; ++j) {
            HighFloat x = (HighFloat(j) + 0.37) / 512;
            HighFloat w = omega_hp(k, x);
            periodic = std::max(periodic, static_cast<double>(abs(omega_hp(k, frac(x + inv_q)) - w)));
            lip = std::max(lip, static_cast<double>(abs(omega_hp(k, frac(x + h)) - w) / h));
        }
        add("c) 1/q_k periodic" + tag, 1e-6 * lv.height - periodic, "sampled at 512 points");
        add("e) sampled difference quotients" + tag, lv.slope * (1 + 1e-6) - lip, "");

        Rational prev = k == 1 ? Rational(1) : level(k - 1).epsilon;
        add("f) eps decreasing" + tag, lv.epsilon <= prev ? 1.0 : -1.0, to_hp(lv.epsilon).str(8));
        Rational le = lipschitz * lv.epsilon;
        add("f) L_k eps_k <= 1/k^2" + tag, le <= Rational(1, k * k) ? 1.0 : -1.0,
            "k^2 L_k eps_k = " + to_hp(le * k * k).str(8));
        if (k < depth()) {
            HighFloat fr = frac(HighFloat(level(k + 1).n) * a);
            add("g) frac(n_{k+1} alpha) <= eps_k" + tag, static_cast<double>((to_hp(lv.epsilon) - fr) / to_hp(lv.epsilon)),
                "n_{k+1} = " + std::to_string(level(k + 1).n));
            add("n increasing" + tag, static_cast<double>(level(k + 1).n - lv.n), "");
        }
        if (mode_ == PrecisionMode::floating) add("precision guard" + tag, 1e-6 - lv.slope * DBL_EPSILON, "L_k * DBL_EPSILON <= 1e-6");
    }
    add("n_1 = 1", levels_.front().n == 1 ? 1.0 : -1.0, "");

    for (int k = 2; k <= depth(); ++k) {
        const std::int64_t n = level(k).n;
        double worst;
        std::string how;
        if (mode_ == PrecisionMode::floating && static_cast<double>(n) * static_cast<double>(grid) <= 2e8) {
            worst = max_return_sum(k, grid);
            how = "direct sums";
        } else {
            // sum_{i < n} F_K(x + i alpha) telescopes to v_K(x) - v_K(x + n alpha)
            worst = 0;
            HighFloat shift = frac(HighFloat(n) * a);
            for (std::size_t j = 0; j < grid; ++j) {
                HighFloat x = (HighFloat(j) + 0.5) / HighFloat(grid);
                HighFloat v = 0;
                for (int l = 1; l <= depth(); ++l) v += omega_hp(l, x) - omega_hp(l, frac(x + shift));
                worst = std::max(worst, static_cast<double>(abs(v)));
            }
            how = "telescoped sums";
        }
        add("iv) return sums" + (" k=" + std::to_string(k)), return_sum_bound() + 1e-9 - worst,
            how + " on " + std::to_string(grid) + " points, sup = " + std::to_string(worst));
    }
}

bool AppendixBPotential::certified() const {
    return std::all_of(certificate_.begin(), certificate_.end(), [](const ConditionCheck& c) { return c.passed; });
}

}  // namespace conflab
