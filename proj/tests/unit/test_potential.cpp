#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"

#include "conflab/errors.hpp"
#include "conflab/potential.hpp"

using namespace conflab;

namespace {
const double kPi = std::numbers::pi;
const double kGolden = (std::sqrt(5.0) - 1) / 2;
}  // namespace

TEST_CASE("constant potential") {
    auto f = Potential::constant(1.0);
    CHECK(f->eval(circle_point(0.3)) == 1.0);
    CHECK(f->eval(finite_point(2)) == 1.0);
    CHECK(f->tail_bound() == 0.0);
    CHECK(truncation_tail_bound(*f) == 0.0);
}

TEST_CASE("coboundary evaluates H o phi - H") {
    auto s = DynSystem::rotation(ContinuedFraction::golden());
    auto f = Potential::coboundary(Potential::trig(TrigPoly::cosine(1)), s);
    for (double x : {0.0, 0.17, 0.5, 0.93}) {
        double expected = std::cos(2 * kPi * (x + kGolden)) - std::cos(2 * kPi * x);
        CHECK(f->eval(circle_point(x)) == doctest::Approx(expected).epsilon(1e-14));
    }
    CHECK(f->known_invariant_mean(s) == 0.0);
}

TEST_CASE("trig polynomials are real valued") {
    std::map<int, std::complex<double>> bad{{1, {1.0, 0.0}}, {-1, {0.5, 0.0}}};
    CHECK_THROWS_AS(TrigPoly{bad}, InvalidArgument);
    auto p = TrigPoly::cos_sin(2, 0.5, -1.5);
    CHECK(p.coefficient(-2) == std::conj(p.coefficient(2)));
    CHECK(p.eval(0.1) == doctest::Approx(0.5 * std::cos(4 * kPi * 0.1) - 1.5 * std::sin(4 * kPi * 0.1)));
}

TEST_CASE("Fourier coboundary solve for cos on the golden rotation") {
    auto s = DynSystem::rotation(ContinuedFraction::golden());
    auto sol = solve_coboundary_fourier(TrigPoly::cosine(1), s);
    REQUIRE(std::holds_alternative<TrigPoly>(sol));
    const auto& h = std::get<TrigPoly>(sol);
    for (int n : {1, -1}) {
        std::complex<double> expected = 0.5 / (std::exp(std::complex<double>(0, 2 * kPi * n * kGolden)) - 1.0);
        CHECK(std::abs(h.coefficient(n) - expected) < 1e-14);
    }
    CHECK(coboundary_grid_residual(h, TrigPoly::cosine(1), s, 1 << 12) < 1e-10);
}

TEST_CASE("Fourier solve edge cases") {
    auto s = DynSystem::rotation(ContinuedFraction::silver());
    auto zero = solve_coboundary_fourier(TrigPoly{}, s);
    REQUIRE(std::holds_alternative<TrigPoly>(zero));
    CHECK(std::get<TrigPoly>(zero).coefficient_l1() == 0.0);
    auto one = solve_coboundary_fourier(TrigPoly::cosine(0), s);
    REQUIRE(std::holds_alternative<NoSolution>(one));
    CHECK(std::get<NoSolution>(one).reason == "nonzero mean");
}

TEST_CASE("random zero-mean trig polynomials solve to grid residual below 1e-10") {
    auto s = DynSystem::rotation(ContinuedFraction::golden());
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 20; ++trial) {
        TrigPoly f;
        for (int n = 1; n <= 5; ++n) f = f + TrigPoly::cos_sin(n, u(rng), u(rng));
        auto sol = solve_coboundary_fourier(f, s);
        REQUIRE(std::holds_alternative<TrigPoly>(sol));
        CHECK(coboundary_grid_residual(std::get<TrigPoly>(sol), f, s) < 1e-10);
    }
}

TEST_CASE("orbit values agree with pointwise evaluation") {
    auto s = DynSystem::rotation(ContinuedFraction::golden());
    auto f = Potential::sum({{2.0, Potential::trig(TrigPoly::sine(3))}, {-1.0, Potential::constant(0.25)}});
    auto ov = f->orbit_values(s, circle_point(0.4), -6, 6);
    REQUIRE(ov.values.size() == 13);
    for (std::int64_t k = -6; k <= 6; ++k)
        CHECK(ov.values[static_cast<std::size_t>(k + 6)] ==
              doctest::Approx(f->eval(s.iterate(circle_point(0.4), k))).epsilon(1e-12));
}

TEST_CASE("time reversal pairs F with phi^{-1}") {
    auto s = DynSystem::rotation(ContinuedFraction::golden());
    auto f = Potential::trig(TrigPoly::cosine(1) + TrigPoly::sine(2, 0.3));
    auto g = Potential::time_reversed(f, s);
    Point x = circle_point(0.21);
    CHECK(g->eval(x) == doctest::Approx(-f->eval(s.step(x, Direction::backward))).epsilon(1e-14));
}

TEST_CASE("table potentials live on finite cycles") {
    auto s = DynSystem::finite_cycle(3);
    auto f = Potential::table({1.0, -0.5, 2.0});
    CHECK(f->eval(finite_point(3)) == 2.0);
    CHECK(*f->known_invariant_mean(s) == doctest::Approx(2.5 / 3));
}
