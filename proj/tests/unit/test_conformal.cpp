#include <cmath>

#include "doctest.h"

#include "conflab/appendix_a.hpp"
#include "conflab/conformal.hpp"
#include "conflab/errors.hpp"

using namespace conflab;

namespace {
DynSystem golden() { return DynSystem::rotation(ContinuedFraction::golden()); }
PotentialPtr squaring_f() { return Potential::polynomial({-0.5, 1.0}); }

std::vector<double> symmetric_grid() { return {-2, -1, -0.5, 0, 0.5, 1, 2}; }
}  // namespace

TEST_CASE("existence check verdicts") {
    auto s = golden();
    CHECK(existence_check(s, Potential::constant(1.0), circle_point(0.1), 1.0, 20000, 1e-3).verdict == Verdict::fails);
    CHECK(existence_check(s, Potential::constant(0.0), circle_point(0.1), 3.0, 20000, 1e-3).verdict == Verdict::holds);
    auto q = DynSystem::squaring_map();
    CHECK(existence_check(q, squaring_f(), interval_point(0.5), 1.0, 20000, 1e-3).verdict == Verdict::holds);
    CHECK(existence_check(q, squaring_f(), interval_point(0.5), -1.0, 20000, 1e-3).verdict == Verdict::fails);
    auto r = existence_check(q, squaring_f(), interval_point(0.5), 1.0, 20000, 1e-3);
    REQUIRE(r.history.size() == 3);
    CHECK(r.history[2].horizon == 20000);
    CHECK_THROWS_AS(existence_check(s, Potential::constant(0.0), circle_point(0.1), 1.0, 500, 1e-3), InvalidArgument);
}

TEST_CASE("existence is sign-monotone on the grid") {
    auto q = DynSystem::squaring_map();
    auto t = OrbitSumTable::build(q, squaring_f(), interval_point(0.3), 1.0, 20000, 20000);
    std::vector<double> betas{0.25, 0.5, 1, 2, 4};
    bool seen_hold = false;
    for (auto it = betas.rbegin(); it != betas.rend(); ++it) {
        bool holds = existence_check(t.with_beta(*it), 20000, 1e-3).verdict == Verdict::holds;
        if (seen_hold) CHECK(holds);
        seen_hold = seen_hold || holds;
    }
    CHECK(seen_hold);
}

TEST_CASE("spectrum scan classifications") {
    auto s = golden();
    std::vector<Point> seeds{circle_point(0.1), circle_point(0.6)};
    auto cosv = spectrum_scan(s, Potential::trig(TrigPoly::cosine(1)), symmetric_grid(), seeds, 20000, 1e-3);
    CHECK(cosv.classification == SpectrumClass::FullLine);
    CHECK(cosv.invariant_mean == 0.0);
    auto one = spectrum_scan(s, Potential::constant(1.0), symmetric_grid(), seeds, 20000, 1e-3);
    CHECK(one.classification == SpectrumClass::ZeroOnly);
    CHECK(one.notes.empty());
    for (const auto& e : one.evidence)
        if (e.beta == 0.0) CHECK(e.verdict == Verdict::holds);

    auto q = DynSystem::squaring_map();
    std::vector<Point> qs{interval_point(0.5), interval_point(0.9)};
    auto neg = spectrum_scan(q, Potential::negated(squaring_f()), symmetric_grid(), qs, 20000, 1e-3, 2);
    CHECK(neg.classification == SpectrumClass::NonposRay);
    CHECK(neg.mismatch == 0.0);

    CHECK_THROWS_AS(spectrum_scan(s, Potential::constant(0.0), {1.0, 2.0}, seeds, 20000, 1e-3), InvalidArgument);
    CHECK_THROWS_AS(spectrum_scan(s, Potential::constant(0.0), {0.0, 1.0}, seeds, 20000, 1e-3), InvalidArgument);
}

TEST_CASE("atomic_periodic weights on a two-cycle") {
    auto c = DynSystem::finite_cycle(2);
    auto f = Potential::table({1.0, -1.0});
    auto m = atomic_periodic(c, *f, finite_point(1), 2, 1.0);
    // brute force: m_2 = e^{beta F(1)} m_1, m_1 + m_2 = 1
    const double e = std::exp(1.0);
    CHECK(m.weight(0) == doctest::Approx(1.0 / (1.0 + e)).epsilon(1e-15));
    CHECK(m.weight(1) == doctest::Approx(e / (1.0 + e)).epsilon(1e-15));
    CHECK(m.weight(0) == doctest::Approx(0.26894).epsilon(1e-4));
    CHECK(max_residual(conformality_residual(m, c, *f, 1.0, standard_test_functions(c))) <= 1e-12);

    auto u = atomic_periodic(c, *f, finite_point(1), 2, 0.0);
    CHECK(u.weight(0) == 0.5);

    try {
        atomic_periodic(c, *Potential::table({1.0, -0.5}), finite_point(1), 2, 1.0);
        FAIL("expected NotCyclic");
    } catch (const NotCyclic& e) {
        CHECK(e.defect() == doctest::Approx(0.5));
    }
    CHECK_THROWS_AS(atomic_periodic(c, *f, finite_point(1), 1, 1.0), NotPeriodic);
}

TEST_CASE("hopf construction") {
    auto s = golden();
    auto tests = standard_test_functions(s);

    auto zero = hopf_construct(s, Potential::constant(0.0), circle_point(0.2), 2.0, 1e-2, 20000, tests);
    CHECK(zero.converged);
    const auto& mz = std::get<WeightedAtomicMeasure>(zero.measure);
    for (std::size_t i = 0; i < mz.size(); ++i) CHECK(mz.weight(i) == doctest::Approx(1.0 / mz.size()));
    for (const auto& r : zero.residuals) CHECK(r.value <= 2.0 / static_cast<double>(mz.size()) + 1e-15);

    auto c = DynSystem::finite_cycle(2);
    auto f = Potential::table({1.0, -1.0});
    auto fin = hopf_construct(c, f, finite_point(1), 1.0, 1e-2, 1000, standard_test_functions(c));
    auto ap = atomic_periodic(c, *f, finite_point(1), 2, 1.0);
    const auto& mf = std::get<WeightedAtomicMeasure>(fin.measure);
    REQUIRE(mf.size() == 2);
    CHECK(mf.weight(0) == ap.weight(0));
    CHECK(mf.weight(1) == ap.weight(1));
    CHECK(fin.chosen.method == "period");

    auto one = hopf_construct(s, Potential::constant(1.0), circle_point(0.2), 1.0, 1e-2, 4096, tests);
    CHECK_FALSE(one.converged);
}

TEST_CASE("hopf measure agrees with the coboundary density") {
    auto s = golden();
    auto H = Potential::trig(TrigPoly::cosine(1));
    auto F = Potential::coboundary(H, s);
    auto tests = standard_test_functions(s);
    auto rep = hopf_construct(s, F, circle_point(0.0), 1.0, 1e-2, 100000, tests);
    CHECK(rep.converged);
    CHECK(max_residual(rep.residuals) <= 1e-2);
    auto dens = coboundary_conformal_density(H, s, 1.0, 1 << 14);
    CHECK(max_residual(conformality_residual(dens, s, *F, 1.0, tests)) <= 1e-8);
    for (const auto& t : tests) CHECK(std::abs(integrate(rep.measure, t.fn) - dens.integrate(t.fn)) < 1e-2);
}

TEST_CASE("coboundary densities") {
    auto s = golden();
    auto H = Potential::trig(TrigPoly::cosine(1));
    auto flat = coboundary_conformal_density(H, s, 0.0, 1 << 10);
    CHECK(flat.density(circle_point(0.3)) == doctest::Approx(1.0).epsilon(1e-14));
    auto d = coboundary_conformal_density(H, s, 1.0, 1 << 14);
    // normalizer: int e^{cos 2 pi x} dx = I_0(1)
    CHECK(d.log_normalizer() == doctest::Approx(std::log(std::cyl_bessel_i(0.0, 1.0))).epsilon(1e-14));
    CHECK(d.integrate([](const Point&) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-14));
    // beta = 0: Lebesgue is invariant, so the residual is pure quadrature error
    auto lam = DensityMeasure::build(s, [](const Point&) { return 0.0; }, 1 << 12, "Lebesgue");
    CHECK(max_residual(conformality_residual(lam, s, *Potential::trig(TrigPoly::sine(2)), 0.0, standard_test_functions(s))) < 1e-12);
}

TEST_CASE("summable atomic measures on the appendix_a orbits") {
    auto s = golden();
    auto A = AppendixAPotential::build(s, {0.0, 0.5}, {{-1.0, true}, {-0.5, false}});
    auto F = Potential::appendix_a(A);
    auto ok = atomic_summable(s, F, circle_point(0.0), -1.0, 30000);
    REQUIRE(std::holds_alternative<SummableMeasure>(ok));
    CHECK(std::get<SummableMeasure>(ok).tail_mass < 1.0);
    CHECK(std::holds_alternative<Divergent>(atomic_summable(s, F, circle_point(0.0), -0.5, 30000)));
    CHECK(std::holds_alternative<Divergent>(atomic_summable(s, F, circle_point(0.0), 1.0, 30000)));
    // open target: no measure at beta_p itself
    CHECK(std::holds_alternative<Divergent>(atomic_summable(s, F, circle_point(0.5), -0.5, 30000)));
}

TEST_CASE("bounded cocycles are never summable") {
    auto s = golden();
    auto F = Potential::coboundary(Potential::trig(TrigPoly::cosine(1, 0.5)), s);
    auto r = atomic_summable(s, F, circle_point(0.3), 2.0, 20000);
    REQUIRE(std::holds_alternative<Divergent>(r));
    CHECK(std::get<Divergent>(r).forward.fit.slope > -0.5);
}

TEST_CASE("invariant bracket") {
    auto q = DynSystem::squaring_map();
    auto b = invariant_bracket(q, squaring_f(), {interval_point(0.4), interval_point(1.0)}, 10000);
    CHECK(b.mean_minus == doctest::Approx(-0.5).epsilon(1e-3));
    CHECK(b.mean_plus == 0.5);
    CHECK(b.weight == doctest::Approx(0.5).epsilon(1e-3));

    auto s = golden();
    auto c = invariant_bracket(s, Potential::trig(TrigPoly::cosine(1)), {circle_point(0.1), circle_point(0.7)}, 10000);
    CHECK(std::abs(c.mean_plus) < 1e-3);
    CHECK(std::abs(c.mean_minus) < 1e-3);
    CHECK_THROWS_AS(invariant_bracket(s, Potential::constant(1.0), {circle_point(0.1)}, 1000), BracketFailed);
}
