// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "conflab/appendix_a.hpp"
#include "conflab/appendix_b.hpp"
#include "conflab/classify.hpp"
#include "conflab/config.hpp"
#include "conflab/conformal.hpp"
#include "conflab/flowprops.hpp"
#include "conflab/kms_finite.hpp"
#include "conflab/run.hpp"

using namespace conflab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            notes.push_back("FAILED: " + what);
        }
    }
    void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(double v) {
    std::ostringstream o;
    o.precision(4);
    o << v;
    return o.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("conflab_acceptance_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<double> random_cyclic(int p, std::mt19937_64& rng) {
    std::vector<double> v(static_cast<std::size_t>(p));
    double sum = 0;
    for (int i = 0; i + 1 < p; ++i) sum += v[static_cast<std::size_t>(i)] = 2 * uniform(rng) - 1;
    v.back() = -sum;
    return v;
}

CMatrix random_matrix(int p, std::mt19937_64& rng) {
    CMatrix m(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) m(i, j) = {2 * uniform(rng) - 1, 2 * uniform(rng) - 1};
    return m;
}

std::vector<double> beta_grid() {
    std::vector<double> g;
    for (int i = -8; i <= 8; ++i) g.push_back(0.5 * i);
    return g;
}

DynSystem golden() { return DynSystem::rotation(ContinuedFraction::golden()); }
DynSystem silver() { return DynSystem::rotation(ContinuedFraction::silver()); }

// Zero-mean trig polynomials with their sup norms bounded by the sum of |coefficients|.
std::vector<std::pair<std::string, TrigPoly>> trig_family() {
    return {
        {"cos(2pi x)", TrigPoly::cosine(1)},
        {"sin(4pi x)", TrigPoly::sine(2)},
        {"cos(2pi x) + 0.5 sin(6pi x)", TrigPoly::cosine(1) + TrigPoly::sine(3, 0.5)},
        {"0.3 cos(10pi x) - sin(2pi x)", TrigPoly::cosine(5, 0.3) + TrigPoly::sine(1, -1.0)},
        {"2 cos(4pi x) + cos(6pi x) + 0.7 sin(8pi x)",
         TrigPoly::cosine(2, 2.0) + TrigPoly::cosine(3) + TrigPoly::sine(4, 0.7)},
    };
}

std::shared_ptr<const AppendixAPotential> appendix_a_default() {
    static auto A = AppendixAPotential::build(golden(), {0.0, 0.5}, {{-1.0, true}, {-0.5, false}});
    return A;
}

// 1. Spectrum taxonomy quartet through the config-driven runner.
Outcome criterion1() {
    Outcome o;
    const std::vector<std::pair<std::string, std::string>> cases{{"spectrum_zero.json", "FullLine"},
                                                                 {"spectrum_one.json", "ZeroOnly"},
                                                                 {"spectrum_squaring.json", "NonnegRay"},
                                                                 {"spectrum_squaring_neg.json", "NonposRay"}};
    auto dir = scratch("quartet");
    auto t0 = std::chrono::steady_clock::now();
    for (const auto& [file, expected] : cases) {
        auto cfg = load_config(std::string(CONFLAB_CONFIG_DIR) + "/" + file, "spectrum");
        cfg.out_dir = (dir / file).string();
        o.require(cfg.horizon == 100000 && cfg.tolerance == 1e-3, file + " uses horizon 1e5 and tol 1e-3");
        auto out = run(cfg);
        std::string got = out.report["result"]["classification"].get<std::string>();
        o.require(got == expected, file + ": expected " + expected + ", got " + got);
        o.note(file + " -> " + got);
    }
    double t = seconds_since(t0);
    o.require(t < 10.0, "runtime " + fmt(t) + " s < 10 s");
    o.note("quartet runtime " + fmt(t) + " s");
    return o;
}

// 2. Minimal systems with zero-mean trig potentials: every grid beta holds.
Outcome criterion2() {
    Outcome o;
    const std::vector<std::pair<std::string, DynSystem>> systems{{"golden", golden()}, {"silver", silver()}};
    std::size_t scans = 0;
    for (const auto& [sname, s] : systems)
        for (const auto& [pname, poly] : trig_family()) {
            auto v = spectrum_scan(s, Potential::trig(poly), beta_grid(), {circle_point(0.1), circle_point(0.6180339)},
                                   100000, 1e-3);
            ++scans;
            o.require(v.classification == SpectrumClass::FullLine, sname + " / " + pname + " classified " + to_string(v.classification));
            for (const auto& e : v.evidence)
                o.require(e.verdict == Verdict::holds, sname + " / " + pname + " at beta " + fmt(e.beta) + ": " + to_string(e.verdict));
        }
    o.note(std::to_string(scans) + " scans x 17 betas, all holds");
    return o;
}

// 3. Conformality residuals of constructed measures.
Outcome criterion3() {
    Outcome o;
    auto s = golden();
    auto tests = standard_test_functions(s);

    double hopf_worst = 0;
    auto hopf = [&](const std::string& label, PotentialPtr f, double beta) {
        auto r = hopf_construct(s, std::move(f), circle_point(0.0), beta, 1e-2, 100000, tests);
        double res = max_residual(r.residuals);
        hopf_worst = std::max(hopf_worst, res);
        o.require(res <= 1e-2, "hopf " + label + " beta " + fmt(beta) + " residual " + fmt(res));
    };
    hopf("F=0", Potential::constant(0.0), 1.0);
    for (double beta : {-1.0, 1.0}) hopf("coboundary of cos", Potential::coboundary(Potential::trig(TrigPoly::cosine(1)), s), beta);
    for (const auto& [name, poly] : trig_family()) hopf(name, Potential::trig(poly), 1.0);

    double atomic_worst = 0;
    std::mt19937_64 rng(3);
    for (int p = 2; p <= 6; ++p) {
        auto c = DynSystem::finite_cycle(p);
        auto f = Potential::table(random_cyclic(p, rng));
        for (double beta : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
            auto m = atomic_periodic(c, *f, finite_point(1), p, beta);
            atomic_worst = std::max(atomic_worst, max_residual(conformality_residual(m, c, *f, beta, standard_test_functions(c))));
        }
    }
    o.require(atomic_worst <= 1e-12, "atomic residual " + fmt(atomic_worst));

    double density_worst = 0;
    for (const auto& [name, poly] : trig_family()) {
        auto H = Potential::trig(poly);
        auto F = Potential::coboundary(H, s);
        for (double beta : {-1.0, 1.0, 2.0}) {
            auto d = coboundary_conformal_density(H, s, beta, 1 << 14);
            density_worst = std::max(density_worst, max_residual(conformality_residual(d, s, *F, beta, tests)));
        }
    }
    o.require(density_worst <= 1e-8, "density residual " + fmt(density_worst));
    o.note("worst residuals: hopf " + fmt(hopf_worst) + ", atomic " + fmt(atomic_worst) + ", density " + fmt(density_worst));
    return o;
}

// 4. Finite-orbit KMS states.
Outcome criterion4() {
    Outcome o;
    std::mt19937_64 rng(17);
    double kms_worst = 0, gibbs_gap = 0;
    for (int p = 2; p <= 6; ++p) {
        auto c = DynSystem::finite_cycle(p);
        auto f = Potential::table(random_cyclic(p, rng));
        auto model = FiniteOrbitModel::from_orbit(c, *f, finite_point(1));
        for (double beta : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
            for (int k = 0; k < 100; ++k)
                kms_worst = std::max(kms_worst, kms_residual(model, beta, random_matrix(p, rng), random_matrix(p, rng)));
            // Gibbs index j is the orbit point phi^j(x): atomic weights from phi(x)
            auto g = gibbs_state(model, beta);
            auto at = atomic_periodic(c, *f, c.step(finite_point(1)), p, beta);
            for (int j = 0; j < p; ++j)
                gibbs_gap = std::max(gibbs_gap, std::abs(g.weights()(j) - at.weight(static_cast<std::size_t>(j))));
        }
    }
    o.require(kms_worst <= 1e-10, "KMS residual " + fmt(kms_worst));
    o.require(gibbs_gap <= 1e-14, "Gibbs vs atomic weights " + fmt(gibbs_gap));
    auto w = non_injectivity_witness(FiniteOrbitModel({1.0, -1.0}), 1.0);
    o.require(w.same_conformal_measure && w.distinct_states, "non-injectivity witness at p=2");
    o.note("KMS " + fmt(kms_worst) + ", Gibbs gap " + fmt(gibbs_gap) + ", witness n=p values " + fmt(w.period_first.real()) +
           " vs " + fmt(w.period_second.real()));
    return o;
}

// 5. Hopf construction against the closed-form coboundary density.
Outcome criterion5() {
    Outcome o;
    auto s = golden();
    auto H = Potential::trig(TrigPoly::cosine(1));
    auto F = Potential::coboundary(H, s);
    auto tests = standard_test_functions(s);
    double worst = 0;
    for (double beta : {-1.0, 1.0}) {
        auto r = hopf_construct(s, F, circle_point(0.0), beta, 1e-2, 100000, tests);
        auto d = coboundary_conformal_density(H, s, beta, 1 << 14);
        for (const auto& t : tests) {
            double gap = std::abs(integrate(r.measure, t.fn) - d.integrate(t.fn));
            worst = std::max(worst, gap);
            o.require(gap <= 1e-2, "beta " + fmt(beta) + " test " + t.name + " gap " + fmt(gap));
        }
    }
    o.note("worst integral gap " + fmt(worst));
    return o;
}

// 6. appendix_a construction.
Outcome criterion6() {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    auto A = appendix_a_default();
    auto s = golden();
    o.require(A->certified(), "certificate");
    for (const auto& c : A->certificate()) o.require(c.passed, "condition " + c.condition + ": " + c.detail);
    for (int p = 0; p < 2; ++p) {
        auto sw = A->sandwich(p, 1000);
        o.require(sw.forward_holds && sw.backward_holds, "sandwich for point " + std::to_string(p));
    }
    auto F = Potential::appendix_a(A);
    // closed target beta_1 = -1 on x_1 = 0; N stays inside the exactly evaluated window
    const std::int64_t N = std::min<std::int64_t>(30000, A->exact_window());
    auto conv = atomic_summable(s, F, circle_point(0.0), -1.0, N);
    o.require(std::holds_alternative<SummableMeasure>(conv), "summable at beta_p = -1");
    o.require(std::holds_alternative<Divergent>(atomic_summable(s, F, circle_point(0.0), -0.5, N)), "divergent at beta_p/2");
    o.require(std::holds_alternative<Divergent>(atomic_summable(s, F, circle_point(0.0), 1.0, N)), "divergent at +1");
    if (auto* m = std::get_if<SummableMeasure>(&conv)) {
        auto v = classify_measure(m->measure, s, F, -1.0, N);
        o.require(v.label == MeasureType::I_infinity, std::string("type ") + to_string(v.label));
        o.note("N_n up to " + std::to_string(A->N(A->depth())) + ", log-log exponent " + fmt(m->forward.log_fit.slope) +
               ", tail mass " + fmt(m->tail_mass) + ", type " + to_string(v.label));
    }
    double t = seconds_since(t0);
    o.require(t < 60.0, "runtime " + fmt(t) + " s < 60 s");
    o.note("runtime " + fmt(t) + " s");
    return o;
}

// 7. appendix_b construction at K=2 against independent oracles.
Outcome criterion7() {
    Outcome o;
    const double alpha = (std::sqrt(5.0) - 1) / 2;
    auto B = AppendixBPotential::build(ContinuedFraction::golden(), 2);
    o.require(B->certified(), "certificate");

    // first Fibonacci denominator q >= 8 with |alpha - p/q| <= 1/(8q)
    long long a = 1, b = 1, q1 = 0;
    while (q1 == 0) {
        if (b >= 8 && std::abs(alpha - static_cast<double>(a) / b) <= 1.0 / (8.0 * b)) q1 = b;
        long long c = a + b;
        a = b;
        b = c;
    }
    o.require(q1 == 8 && B->level(1).q == BigInt(8), "q_1 = 8");
    // first n >= 2 with frac(n alpha) <= eps_1 = 1/q_1^2
    long long n2 = 0;
    for (long long n = 2; n2 == 0 && n < 100000; ++n)
        if (n * alpha - std::floor(n * alpha) <= 1.0 / 64) n2 = n;
    o.require(n2 == 34 && B->level(2).n == 34, "n_2 = 34");
    for (int k = 1; k <= 2; ++k) o.require(B->omega_integral(k) == Rational(2, k), "integral of omega_" + std::to_string(k) + " = 2/k");
    double quad = B->quadrature(1 << 20);
    o.require(std::abs(quad) <= 1e-6, "quadrature of F_K " + fmt(quad));
    double sup = B->max_return_sum(2, 10000);
    o.require(sup <= 1.25 + 1e-9, "sup of return sums " + fmt(sup));
    o.note("q_1 = " + std::to_string(q1) + ", n_2 = " + std::to_string(n2) + ", quadrature " + fmt(quad) + ", sup " + fmt(sup) +
           " (bound 1.25)");
    return o;
}

// 8. Flow properties.
Outcome criterion8() {
    Outcome o;
    auto s = golden();
    std::vector<Point> seeds{circle_point(0.1), circle_point(0.55)};
    auto H = TrigPoly::cosine(1) + TrigPoly::sine(3, 0.5);
    const double h_sup = 1.5;
    auto cob = innerness_test(s, Potential::coboundary(Potential::trig(H), s), seeds, 100000);
    o.require(cob.evidence == Evidence::inner, "coboundary plateau");
    for (const auto& p : cob.report.sups) o.require(p.sup <= 2 * h_sup, "coboundary sup " + fmt(p.sup) + " at " + std::to_string(p.horizon));
    auto one = innerness_test(s, Potential::constant(1.0), seeds, 100000);
    o.require(one.evidence == Evidence::not_inner, "F=1 not inner");
    o.require(one.report.growth && std::abs(one.report.growth->slope - 1.0) < 1e-6, "F=1 growth slope 1");

    auto d = hn_defect(s, Potential::trig(TrigPoly::cosine(1)), {100, 1000, 10000}, 1 << 12);
    o.require(d.points.size() == 3 && d.points.back().defect < 0.05, "h_n defect at 1e4 " + fmt(d.points.back().defect));
    o.require(d.majorant_decreasing, "h_n defect majorant decreasing");

    o.require(!approx_inner_test(DynSystem::squaring_map(), Potential::polynomial({-0.5, 1.0})).approximately_inner,
              "squaring map F = x - 1/2 not approximately inner");
    int checked = 0;
    // three base points need a later onset before (b_n) admits every N_n
    AppendixAOptions late;
    late.onset = 1024;
    for (auto A : {appendix_a_default(), AppendixAPotential::build(s, {0.25}, {{-2.0, true}}),
                   AppendixAPotential::build(s, {0.0, 0.5}, {{-0.5, false}, {-1.0, true}}),
                   AppendixAPotential::build(s, {0.0, 0.3, 0.7}, {{-1.0, false}, {-3.0, true}, {-0.25, true}}, late)}) {
        auto r = approx_inner_test(s, Potential::appendix_a(A));
        o.require(r.approximately_inner, "appendix_a potential with " + std::to_string(A->point_count()) + " points");
        ++checked;
    }
    o.note("h_n defects " + fmt(d.points[0].defect) + ", " + fmt(d.points[1].defect) + ", " + fmt(d.points[2].defect) + "; " +
           std::to_string(checked) + " appendix_a potentials approximately inner");
    return o;
}

// 9. Bounded cocycles never receive a type I label.
Outcome criterion9() {
    Outcome o;
    auto s = golden();
    auto B = AppendixBPotential::build(ContinuedFraction::golden(), 2);
    auto F = Potential::sum({{1.0, Potential::coboundary(Potential::trig(TrigPoly::cosine(1)), s)}, {1.0, Potential::appendix_b(B)}});
    auto tests = standard_test_functions(s);
    int runs = 0;
    for (double beta : {-1.0, 1.0})
        for (double x : {0.0, 0.37}) {
            auto rep = hopf_construct(s, F, circle_point(x), beta, 1e-2, 100000, tests);
            auto v = classify_measure(rep.measure, s, F, beta, 20000);
            o.require(v.label != MeasureType::I_p && v.label != MeasureType::I_infinity,
                      "beta " + fmt(beta) + " x " + fmt(x) + " labelled " + to_string(v.label));
            o.require(std::holds_alternative<Divergent>(atomic_summable(s, F, circle_point(x), beta, 20000)),
                      "atomic sum diverges at beta " + fmt(beta) + " x " + fmt(x));
            ++runs;
        }
    o.note(std::to_string(runs) + " measures, none of type I");
    return o;
}

// 10. Byte-identical reports from two CLI runs.
Outcome criterion10() {
    Outcome o;
    auto dir = scratch("determinism");
    const std::string cfg = std::string(CONFLAB_CONFIG_DIR) + "/spectrum_squaring.json";
    for (const char* sub : {"a", "b"}) {
        std::string cmd = std::string(CONFLAB_CLI_PATH) + " spectrum --config " + cfg + " --seed 1 --out " + (dir / sub).string() +
                          " > " + (dir / (std::string(sub) + ".log")).string() + " 2>&1";
        o.require(std::system(cmd.c_str()) == 0, std::string("CLI run ") + sub);
    }
    auto a = slurp(dir / "a" / "report.json"), b = slurp(dir / "b" / "report.json");
    o.require(!a.empty() && a == b, "report.json byte-identical");
    o.note(std::to_string(a.size()) + " bytes each");
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"spectrum taxonomy quartet", criterion1},
        {"minimal dichotomy on golden and silver rotations", criterion2},
        {"conformality residuals", criterion3},
        {"finite-orbit KMS states", criterion4},
        {"hopf vs coboundary density", criterion5},
        {"appendix_a construction", criterion6},
        {"appendix_b construction", criterion7},
        {"flow properties", criterion8},
        {"classification honesty", criterion9},
        {"determinism", criterion10},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        double t = seconds_since(t0);
        if (!o.pass) ++failed;
        std::printf("%s criterion %zu: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), t);
        for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
