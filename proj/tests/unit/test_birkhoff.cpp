#include <cmath>
#include <random>

#include "doctest.h"

#include "conflab/birkhoff.hpp"
#include "conflab/errors.hpp"

using namespace conflab;

namespace {
DynSystem golden() { return DynSystem::rotation(ContinuedFraction::golden()); }

// Direct oracle for the three-case definition.
double S_oracle(const DynSystem& s, const Potential& f, const Point& x, std::int64_t k) {
    double acc = 0;
    if (k > 0)
        for (std::int64_t j = 0; j < k; ++j) acc += f.eval(s.iterate(x, j));
    for (std::int64_t j = 1; j <= -k; ++j) acc -= f.eval(s.iterate(x, -j));
    return acc;
}
}  // namespace

TEST_CASE("birkhoff_sum follows the three-case definition") {
    auto s = golden();
    auto f = Potential::trig(TrigPoly::cosine(1) + TrigPoly::sine(2, 0.5));
    Point x = circle_point(0.3);
    CHECK(birkhoff_sum(s, *f, x, 0) == 0.0);
    CHECK(birkhoff_sum(s, *f, x, -1) == doctest::Approx(-f->eval(s.step(x, Direction::backward))).epsilon(1e-14));
    for (std::int64_t k : {-17, -3, 1, 5, 40}) CHECK(birkhoff_sum(s, *f, x, k) == doctest::Approx(S_oracle(s, *f, x, k)).epsilon(1e-12));

    auto c = DynSystem::finite_cycle(2);
    CHECK(birkhoff_sum(c, *Potential::table({1.0, -1.0}), finite_point(1), 2) == 0.0);
}

TEST_CASE("tables: zeros, extension and telescoping") {
    auto s = golden();
    auto zero = OrbitSumTable::build(s, Potential::constant(0.0), circle_point(0.1), 1.0, 2, 2);
    for (std::int64_t k = -2; k <= 3; ++k) CHECK(zero.S(k) == 0.0);

    auto f = Potential::trig(TrigPoly::cosine(3, 0.7));
    auto small = OrbitSumTable::build(s, f, circle_point(0.45), 2.0, 2, 2);
    auto ext = small.extend(4, 4);
    auto fresh = OrbitSumTable::build(s, f, circle_point(0.45), 2.0, 4, 4);
    for (std::int64_t k = -4; k <= 5; ++k) CHECK(ext.S(k) == doctest::Approx(fresh.S(k)).epsilon(1e-12));
    CHECK(ext.telescoping_residual() < 1e-15);
    CHECK_THROWS_AS(small.S(4), InvalidArgument);
    CHECK_THROWS_AS(small.extend(1, 4), InvalidArgument);

    auto finite = OrbitSumTable::build(DynSystem::finite_cycle(3), Potential::table({0.5, 0.25, -0.75}), finite_point(1), 1.0, 6, 6);
    CHECK(finite.telescoping_residual() == 0.0);
    CHECK(finite.with_beta(-3.0).beta_S(2) == doctest::Approx(-3.0 * 0.75));
}

TEST_CASE("cocycle identity on random triples") {
    auto s = golden();
    auto f = Potential::trig(TrigPoly::cosine(1) + TrigPoly::cos_sin(2, 0.2, -0.4));
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> ki(-60, 60);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 1000; ++trial) {
        int k = ki(rng), l = ki(rng);
        Point x = circle_point(u(rng));
        double lhs = birkhoff_sum(s, *f, x, k + l);
        double rhs = birkhoff_sum(s, *f, x, k) + birkhoff_sum(s, *f, s.iterate(x, k), l);
        CHECK(std::abs(lhs - rhs) <= 1e-10);
    }
    auto c = DynSystem::finite_cycle(5);
    auto t = Potential::table({1.0, 2.0, -0.5, 4.0, 0.25});
    for (int k = -12; k <= 12; ++k)
        for (int l = -12; l <= 12; ++l)
            for (int j = 1; j <= 5; ++j) {
                Point x = finite_point(j);
                CHECK(birkhoff_sum(c, *t, x, k + l) == birkhoff_sum(c, *t, x, k) + birkhoff_sum(c, *t, c.iterate(x, k), l));
            }
}

TEST_CASE("time reversal reindexes the cocycle") {
    // S_k(-F o phi^{-1}, phi^{-1})(x) = S_{-k}(F, phi)(x)
    auto s = golden();
    auto f = Potential::trig(TrigPoly::sine(1) + TrigPoly::cosine(2, 0.3));
    auto r = s.reversed();
    auto g = Potential::time_reversed(f, s);
    Point x = circle_point(0.77);
    auto tf = OrbitSumTable::build(s, f, x, 1.0, 50, 50);
    auto tg = OrbitSumTable::build(r, g, x, 1.0, 50, 50);
    for (std::int64_t k = -50; k <= 50; ++k) CHECK(tg.S(k) == doctest::Approx(tf.S(-k)).epsilon(1e-10));
}

TEST_CASE("Cesaro statistics on the squaring map") {
    auto s = DynSystem::squaring_map();
    auto f = Potential::polynomial({-0.5, 1.0});
    auto t = OrbitSumTable::build(s, f, interval_point(0.5), 1.0, 10000, 10000);
    auto fw = cesaro_limsup_estimate(t, Direction::forward);
    auto bw = cesaro_limsup_estimate(t, Direction::backward);
    CHECK(fw.averages.size() == static_cast<std::size_t>(fw.horizon));
    CHECK(fw.tail_max == doctest::Approx(-0.5).epsilon(0.04));
    CHECK(bw.tail_max == doctest::Approx(-0.5).epsilon(0.04));
    auto z = OrbitSumTable::build(s, Potential::constant(0.0), interval_point(0.5), 1.0, 100, 100);
    for (double a : cesaro_limsup_estimate(z, Direction::forward).averages) CHECK(a == 0.0);
    CHECK_THROWS_AS(cesaro_limsup_estimate(z, Direction::forward, 5), InvalidArgument);
}

TEST_CASE("log partition") {
    auto s = golden();
    auto zero = OrbitSumTable::build(s, Potential::constant(0.0), circle_point(0.0), 1.0, 7, 9);
    CHECK(log_partition(zero, -7, 9) == doctest::Approx(std::log(17.0)));
    CHECK(log_partition(zero, 0, 0) == 0.0);

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> vals(5);
    for (auto& v : vals) v = u(rng);
    auto c = DynSystem::finite_cycle(5);
    auto t = OrbitSumTable::build(c, Potential::table(vals), finite_point(2), 1.7, 50, 50);
    long double direct = 0;
    for (std::int64_t k = -50; k <= 50; ++k) direct += std::exp(static_cast<long double>(t.beta_S(k)));
    CHECK(log_partition(t, -50, 50) == doctest::Approx(static_cast<double>(std::log(direct))).epsilon(1e-12));

    // no overflow at |beta S_k| near 10^4
    auto one = OrbitSumTable::build(s, Potential::constant(1.0), circle_point(0.0), 1.0, 10000, 10000);
    CHECK(log_partition(one, -10000, 10000) == doctest::Approx(10000 - std::log1p(-std::exp(-1.0))).epsilon(1e-12));
}

TEST_CASE("sup of partial sums") {
    auto s = golden();
    auto H = Potential::trig(TrigPoly::cosine(1));
    auto t = OrbitSumTable::build(s, Potential::coboundary(H, s), circle_point(0.2), 1.0, 0, 5000);
    CHECK(sup_partial_sums(t) <= 2.0);
    auto one = OrbitSumTable::build(s, Potential::constant(1.0), circle_point(0.2), 1.0, 0, 100);
    CHECK(sup_partial_sums(one) == doctest::Approx(101.0));
    auto zero = OrbitSumTable::build(s, Potential::constant(0.0), circle_point(0.2), 1.0, 0, 100);
    CHECK(sup_partial_sums(zero) == 0.0);
}
