#include <cmath>

#include "doctest.h"

#include "conflab/appendix_a.hpp"
#include "conflab/errors.hpp"
#include "conflab/potential.hpp"

using namespace conflab;

namespace {
DynSystem golden() { return DynSystem::rotation(ContinuedFraction::golden()); }

std::shared_ptr<const AppendixAPotential> acceptance_construction() {
    static auto A = AppendixAPotential::build(golden(), {0.0, 0.5}, {{-1.0, true}, {-0.5, false}});
    return A;
}
}  // namespace

TEST_CASE("single base point: tent peaks on the forward orbit") {
    auto A = AppendixAPotential::build(golden(), {0.0}, {{-1.0, true}});
    auto s = golden();
    for (int n = 0; n <= 3; ++n) {
        double x = s.coordinate(s.iterate(circle_point(0.0), n));
        CHECK(A->eval(x) == doctest::Approx(A->b(0, n)).epsilon(1e-12));
    }
    CHECK(A->certified());
}

TEST_CASE("acceptance construction: N_n and certificate") {
    auto A = acceptance_construction();
    std::vector<std::int64_t> N;
    for (int n = 0; n <= 4; ++n) N.push_back(A->N(n));
    CHECK(N == std::vector<std::int64_t>{9, 48, 221, 1506, 32210});
    for (int n = 0; n <= 4; ++n) CHECK(A->N(n) >= 3 * (n + 1));
    for (const auto& c : A->certificate()) {
        INFO(c.condition << ": " << c.detail);
        CHECK(c.passed);
    }
}

TEST_CASE("sequence definitions") {
    auto A = acceptance_construction();
    CHECK(A->c(0) == doctest::Approx(1.0));
    CHECK(A->d(0) == doctest::Approx(1.0));
    for (std::int64_t i : {0, 5, 100, 10000}) {
        // closed target: a_i = (log c_{i+1} - log c_i) / beta
        CHECK(A->a(0, i) == doctest::Approx((std::log(A->c(i + 1)) - std::log(A->c(i))) / -1.0).epsilon(1e-9));
        CHECK(A->a(1, i) == doctest::Approx((std::log(A->d(i + 1)) - std::log(A->d(i))) / -0.5).epsilon(1e-9));
        CHECK(A->b(0, i) == doctest::Approx(A->t(i) * A->a(0, i)).epsilon(1e-12));
        CHECK(A->a(0, i) > 0);
        CHECK(A->a(0, i) < A->b(0, i));
        CHECK(A->S(i) == std::max(A->b(0, i), A->b(1, i)));
    }
    CHECK(A->tail_bound() == doctest::Approx(A->S(4) + 0.25));
}

TEST_CASE("summability dichotomies of the default sequences") {
    auto A = acceptance_construction();
    // partial sums over the decades [10^k, 10^{k+1})
    auto decade = [&](double s, auto seq, int k) {
        CompensatedSum acc;
        for (std::int64_t n = static_cast<std::int64_t>(std::pow(10, k)); n < static_cast<std::int64_t>(std::pow(10, k + 1)); ++n)
            acc.add(std::pow(seq(n), s));
        return acc.value();
    };
    auto c = [&](std::int64_t n) { return A->c(n); };
    auto d = [&](std::int64_t n) { return A->d(n); };
    // c^1: decade contributions shrink (summable); c^{1/2}: they grow
    CHECK(decade(1.0, c, 5) < 0.8 * decade(1.0, c, 4));
    CHECK(decade(0.5, c, 5) > decade(0.5, c, 4));
    // d^1: constant decade contributions (log growth, divergent); d^{1.1}: shrinking
    CHECK(decade(1.0, d, 5) == doctest::Approx(decade(1.0, d, 4)).epsilon(0.01));
    CHECK(decade(1.1, d, 5) < 0.85 * decade(1.1, d, 4));
}

TEST_CASE("sandwich along base-point orbits") {
    auto A = acceptance_construction();
    for (int p = 0; p < 2; ++p) {
        auto r20 = A->sandwich(p, 20);
        CHECK(r20.forward_holds);
        CHECK(r20.backward_holds);
        auto r = A->sandwich(p, 1000);
        CHECK(r.forward_holds);
        CHECK(r.backward_holds);
    }
}

TEST_CASE("Lebesgue integral vanishes") {
    auto A = acceptance_construction();
    double v = golden().integrate_invariant([&](const Point& x) { return A->eval(std::get<CirclePoint>(x).x); }, 1 << 20);
    CHECK(std::abs(v) <= A->tail_bound());
    CHECK(std::abs(v) < 1e-6);
}

TEST_CASE("arcs of each level are disjoint") {
    auto A = acceptance_construction();
    for (int n = 0; n <= A->depth(); ++n)
        for (int p = 0; p < 2; ++p) {
            const auto& arc = A->arcs(n, p);
            CHECK(circle_distance(arc.center_plus, arc.center_minus) > 2 * arc.radius);
            CHECK(arc.tent_half_width < arc.radius);
        }
}

TEST_CASE("completed orbit values beyond the truncation depth") {
    auto A = acceptance_construction();
    auto F = Potential::appendix_a(A);
    auto ov = F->orbit_values(golden(), circle_point(0.0), -10, 10);
    REQUIRE(ov.exact_window.has_value());
    // levels above the depth contribute +b_n at k = n and -b_n at k = -n-1
    CHECK(ov.values[10 + 5] == doctest::Approx(A->completed_value(0, 5)));
    CHECK(A->completed_value(0, 5) == doctest::Approx(A->b(0, 5)).epsilon(1e-12));
    CHECK(A->completed_value(0, -6) == doctest::Approx(-A->b(0, 5)).epsilon(1e-12));
}

TEST_CASE("non-rotation systems are rejected") {
    CHECK_THROWS(AppendixAPotential::build(DynSystem::sine_conjugated_rotation(ContinuedFraction::golden(), 0.2), {0.0},
                                           {{-1.0, true}}));
}
