#include "conflab/run.hpp"

#include <filesystem>
#include <random>

#include "conflab/appendix_a.hpp"
#include "conflab/appendix_b.hpp"
#include "conflab/errors.hpp"
#include "conflab/report.hpp"

namespace conflab {

namespace {

struct Context {
    const RunConfig& c;
    DynSystem s;
    PotentialPtr f;
    std::filesystem::path dir;
    RunOutcome out;

    std::string file(const std::string& name) {
        out.files.push_back(name);
        return (dir / name).string();
    }
};

Point base_point(const RunConfig& c, const DynSystem& s) {
    if (!c.point.is_null()) return make_point(c.point, s);
    switch (s.space()) {
        case SpaceKind::finite: return finite_point(1);
        case SpaceKind::interval: return interval_point(0.5);
        default: return circle_point(0.0);
    }
}

const Potential::Coboundary* coboundary_of(const Potential& f) { return std::get_if<Potential::Coboundary>(&f.kind()); }

void run_spectrum(Context& ctx) {
    auto seeds = make_seeds(ctx.c, ctx.s);
    auto v = spectrum_scan(ctx.s, ctx.f, ctx.c.beta_grid, seeds, ctx.c.horizon, ctx.c.tolerance, ctx.c.threads);
    ctx.out.report["result"] = to_json(v);
    write_spectrum_csv(ctx.file("spectrum.csv"), v);
    bool decided = false;
    for (const auto& e : v.evidence) decided = decided || (e.beta != 0.0 && e.verdict != Verdict::inconclusive);
    ctx.out.exit_code = decided || v.evidence.size() == 1 ? 0 : 2;
}

struct Constructed {
    ConformalReport hopf;
    std::optional<DensityMeasure> density;
    Json json;
};

Constructed construct(Context& ctx) {
    const Point x = base_point(ctx.c, ctx.s);
    Constructed out;
    auto tests = standard_test_functions(ctx.s);
    out.hopf = hopf_construct(ctx.s, ctx.f, x, ctx.c.beta, ctx.c.ratio_tol, ctx.c.max_horizon, tests);
    out.json["hopf"] = to_json(out.hopf);

    const auto& m = std::get<WeightedAtomicMeasure>(out.hopf.measure);
    auto lo = m.first_index().value_or(0), hi = m.last_index().value_or(0);
    auto table = OrbitSumTable::build(ctx.s, ctx.f, x, ctx.c.beta, std::max<std::int64_t>(-lo, 0), std::max<std::int64_t>(hi, 0));
    write_measure_csv(ctx.file("measure.csv"), m, [&](std::int64_t k) { return table.S(k); });

    if (const auto* cb = coboundary_of(*ctx.f); cb && ctx.s.flags().uniquely_ergodic && ctx.s.flags().invariant_measure_known) {
        out.density = coboundary_conformal_density(cb->transfer, ctx.s, ctx.c.beta, ctx.c.grid);
        auto res = conformality_residual(*out.density, ctx.s, *ctx.f, ctx.c.beta, tests);
        double agreement = 0;
        for (const auto& t : tests)
            agreement = std::max(agreement, std::abs(integrate(out.hopf.measure, t.fn) - out.density->integrate(t.fn)));
        out.json["density"] = {{"grid", out.density->grid()},
                               {"reference", out.density->reference()},
                               {"residuals", to_json(res)},
                               {"max_residual", num(max_residual(res))},
                               {"hopf_agreement", num(agreement)}};
    }
    return out;
}

void run_construct(Context& ctx) {
    auto c = construct(ctx);
    ctx.out.report["result"] = c.json;
    ctx.out.exit_code = c.hopf.converged ? 0 : 2;
}

void run_classify(Context& ctx) {
    auto c = construct(ctx);
    Json result = c.json;
    auto v = classify_measure(c.hopf.measure, ctx.s, ctx.f, ctx.c.beta, ctx.c.horizon);
    result["type"] = to_json(v);
    const auto& m = std::get<WeightedAtomicMeasure>(c.hopf.measure);
    if (m.first_index() && m.last_index()) {
        auto sol = solve_cocycle(ctx.s, ctx.f, *m.base(), ctx.c.beta, std::min<std::int64_t>(*m.first_index(), 0),
                                 std::max<std::int64_t>(*m.last_index(), 1));
        result["invariant_measure"] = to_json(invariant_from_cocycle(m, sol, ctx.s));
    }
    if (c.density) result["density_type"] = to_json(classify_measure(*c.density, ctx.s, ctx.f, ctx.c.beta, ctx.c.horizon));
    ctx.out.report["result"] = result;
}

void run_gibbs(Context& ctx) {
    const Point x = base_point(ctx.c, ctx.s);
    auto model = FiniteOrbitModel::from_orbit(ctx.s, *ctx.f, x);
    auto tau = gibbs_state(model, ctx.c.beta);
    // matrix index j is the orbit point phi^j(x); atomic_periodic starts at phi(x)
    auto atomic = atomic_periodic(ctx.s, *ctx.f, ctx.s.step(x), model.p(), ctx.c.beta);
    double weight_gap = 0;
    for (int j = 0; j < model.p(); ++j)
        weight_gap = std::max(weight_gap, std::abs(tau.weights()(j) - atomic.weight(static_cast<std::size_t>(j))));

    std::mt19937_64 rng(ctx.c.seed);
    auto uniform = [&] { return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0; };
    auto random_matrix = [&] {
        CMatrix a(model.p(), model.p());
        for (int i = 0; i < model.p(); ++i)
            for (int j = 0; j < model.p(); ++j) a(i, j) = {uniform(), uniform()};
        return a;
    };
    double worst = 0;
    for (int i = 0; i < ctx.c.pairs; ++i) {
        CMatrix a = random_matrix(), b = random_matrix();
        worst = std::max(worst, kms_residual(model, ctx.c.beta, a, b));
    }
    auto w = non_injectivity_witness(model, ctx.c.beta);
    Json h = Json::array(), weights = Json::array(), fv = Json::array();
    for (int j = 0; j < model.p(); ++j) {
        h.push_back(num(model.hamiltonian_diagonal()(j)));
        weights.push_back(num(tau.weights()(j)));
        fv.push_back(num(model.f_values()[static_cast<std::size_t>(j)]));
    }
    ctx.out.report["result"] = {
        {"p", model.p()},
        {"f_values", fv},
        {"hamiltonian_diagonal", h},
        {"weights", weights},
        {"atomic_weight_gap", num(weight_gap)},
        {"kms_residual", {{"pairs", ctx.c.pairs}, {"max", num(worst)}}},
        {"non_injectivity_witness",
         {{"diagonal", {num(w.diagonal_first), num(w.diagonal_second)}},
          {"period_monomial_real", {num(w.period_first.real()), num(w.period_second.real())}},
          {"same_conformal_measure", w.same_conformal_measure},
          {"distinct_states", w.distinct_states}}}};
}

void run_potential_build(Context& ctx) {
    Json r;
    bool certified = false;
    if (const auto* a = std::get_if<Potential::AppendixA>(&ctx.f->kind())) {
        const auto& A = *a->construction;
        Json Ns = Json::array();
        for (int n = 0; n <= A.depth() + 1; ++n) Ns.push_back(A.N(n));
        Json sand = Json::array();
        for (int p = 0; p < A.point_count(); ++p) {
            auto sr = A.sandwich(p, A.options().verify_window);
            sand.push_back({{"point", p},
                            {"m_max", sr.m_max},
                            {"forward_holds", sr.forward_holds},
                            {"backward_holds", sr.backward_holds},
                            {"worst_forward_margin", num(sr.worst_forward_margin)},
                            {"worst_backward_margin", num(sr.worst_backward_margin)}});
        }
        r = {{"construction", "appendix_a"},
             {"depth", A.depth()},
             {"N", Ns},
             {"last_N_capped", A.last_N_capped()},
             {"exact_window", A.exact_window()},
             {"tail_bound", num(A.tail_bound())},
             {"sandwich", sand},
             {"certificate", to_json(A.certificate())}};
        certified = A.certified();
    } else if (const auto* b = std::get_if<Potential::AppendixB>(&ctx.f->kind())) {
        const auto& B = *b->construction;
        Json levels = Json::array();
        for (const auto& lv : B.levels())
            levels.push_back({{"k", lv.k},
                              {"p", lv.p.str()},
                              {"q", lv.q.str()},
                              {"n", lv.n},
                              {"epsilon", lv.epsilon.str()},
                              {"omega_integral", B.omega_integral(lv.k).str()},
                              {"slope", num(lv.slope)}});
        r = {{"construction", "appendix_b"},
             {"K", B.depth()},
             {"precision", to_string(B.mode())},
             {"levels", levels},
             {"tail_bound", num(B.tail_bound())},
             {"return_sum_bound", num(B.return_sum_bound())},
             {"certificate", to_json(B.certificate())}};
        if (B.mode() == PrecisionMode::floating) r["quadrature"] = num(B.quadrature(ctx.c.grid));
        certified = B.certified();
    } else {
        throw ConfigError("potential.kind", "potential-build handles appendix_a and appendix_b");
    }
    r["certified"] = certified;
    ctx.out.report["result"] = r;
    if (!certified) throw ConstraintViolation("certificate", "construction certificate failed; see report.json");
}

void run_flow_props(Context& ctx) {
    auto seeds = make_seeds(ctx.c, ctx.s);
    auto inner = innerness_test(ctx.s, ctx.f, seeds, ctx.c.horizon, ctx.c.tolerance);
    auto approx = approx_inner_test(ctx.s, ctx.f, ctx.c.tolerance, seeds, ctx.c.horizon);
    Json r{{"innerness", to_json(inner.report)}, {"approximate_innerness", to_json(approx.report)}};
    if (ctx.s.flags().invariant_measure_known || ctx.s.space() == SpaceKind::interval)
        r["hn_defect"] = to_json(hn_defect(ctx.s, ctx.f, ctx.c.n_list, ctx.c.grid));
    ctx.out.report["result"] = r;
    ctx.out.exit_code = inner.evidence == Evidence::inconclusive ? 2 : 0;
}

}  // namespace

RunOutcome run(const RunConfig& c) {
    std::filesystem::create_directories(c.out_dir);
    DynSystem s = make_system(c.system);
    PotentialPtr f = make_potential(c.potential, s, c.precision);
    Context ctx{c, s, f, c.out_dir, {}};
    ctx.out.report["schema_version"] = kSchemaVersion;
    ctx.out.report["command"] = c.command;
    ctx.out.report["config"] = to_json(c);
    ctx.out.report["system"] = s.name();
    ctx.out.report["potential"] = f->kind_name();

    auto write_report = [&] { write_json(ctx.file("report.json"), ctx.out.report); };
    try {
        if (c.command == "spectrum") run_spectrum(ctx);
        else if (c.command == "construct") run_construct(ctx);
        else if (c.command == "classify") run_classify(ctx);
        else if (c.command == "gibbs") run_gibbs(ctx);
        else if (c.command == "potential-build") run_potential_build(ctx);
        else if (c.command == "flow-props") run_flow_props(ctx);
        else throw ConfigError("command", "unknown command \"" + c.command + "\"");
    } catch (const ConstraintViolation&) {
        write_report();
        throw;
    }
    ctx.out.report["exit_code"] = ctx.out.exit_code;
    write_report();
    return ctx.out;
}

}  // namespace conflab
