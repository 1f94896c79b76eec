#include "conflab/conformal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "conflab/errors.hpp"
#include "conflab/parallel.hpp"

namespace conflab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

bool rises(double later, double earlier, double slack) { return later - earlier > slack; }

}  // namespace

const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::holds: return "holds";
        case Verdict::fails: return "fails";
        default: return "inconclusive";
    }
}

const char* to_string(SpectrumClass c) noexcept {
    switch (c) {
        case SpectrumClass::ZeroOnly: return "ZeroOnly";
        case SpectrumClass::NonnegRay: return "NonnegRay";
        case SpectrumClass::NonposRay: return "NonposRay";
        default: return "FullLine";
    }
}

ExistenceResult existence_check(const DynSystem& s, PotentialPtr f, const Point& x, double beta, std::int64_t horizon,
                                double tol) {
    if (horizon < 1000) throw InvalidArgument("existence_check needs a horizon of at least 1000");
    return existence_check(OrbitSumTable::build(s, std::move(f), x, beta, horizon, horizon), horizon, tol);
}

ExistenceResult existence_check(const OrbitSumTable& t, std::int64_t horizon, double tol) {
    if (horizon < 1000) throw InvalidArgument("existence_check needs a horizon of at least 1000");
    if (!(tol > 0)) throw InvalidArgument("existence_check tolerance must be positive");
    ExistenceResult r;
    r.beta = t.beta();
    r.tol = tol;
    for (std::int64_t h : {horizon / 4, horizon / 2, horizon}) {
        auto fw = cesaro_limsup_estimate(t, Direction::forward, h);
        auto bw = cesaro_limsup_estimate(t, Direction::backward, h);
        r.history.push_back({h, fw.tail_max, bw.tail_max});
        if (h == horizon) {
            r.forward = std::move(fw);
            r.backward = std::move(bw);
        }
    }
    const auto& h = r.history;
    auto side_holds = [&](double TailPoint::*side) {
        return h[2].*side <= tol && !rises(h[1].*side, h[0].*side, 0.1 * tol) && !rises(h[2].*side, h[1].*side, 0.1 * tol);
    };
    auto side_fails = [&](double TailPoint::*side) { return h[2].*side >= 10 * tol && h[2].*side >= h[1].*side - tol; };
    if (side_holds(&TailPoint::forward) && side_holds(&TailPoint::backward))
        r.verdict = Verdict::holds;
    else if (side_fails(&TailPoint::forward) || side_fails(&TailPoint::backward))
        r.verdict = Verdict::fails;
    else
        r.verdict = Verdict::inconclusive;
    return r;
}

SpectrumVerdict spectrum_scan(const DynSystem& s, PotentialPtr f, const std::vector<double>& beta_grid,
                              const std::vector<Point>& seeds, std::int64_t horizon, double tol, unsigned threads) {
    if (beta_grid.empty()) throw InvalidArgument("beta grid must be nonempty");
    if (seeds.empty()) throw InvalidArgument("spectrum_scan needs at least one seed");
    if (std::find(beta_grid.begin(), beta_grid.end(), 0.0) == beta_grid.end())
        throw InvalidArgument("beta grid must contain 0");
    for (double b : beta_grid)
        if (b != 0.0 && std::find(beta_grid.begin(), beta_grid.end(), -b) == beta_grid.end())
            throw InvalidArgument("beta grid must be symmetric about 0");

    std::vector<std::optional<OrbitSumTable>> tables(seeds.size());
    parallel_for(seeds.size(), threads,
                 [&](std::size_t i) { tables[i] = OrbitSumTable::build(s, f, seeds[i], 1.0, horizon, horizon); });

    const std::size_t nb = beta_grid.size();
    std::vector<ExistenceResult> results(nb * seeds.size());
    parallel_for(results.size(), threads, [&](std::size_t task) {
        std::size_t bi = task / seeds.size(), si = task % seeds.size();
        results[task] = existence_check(tables[si]->with_beta(beta_grid[bi]), horizon, tol);
    });

    SpectrumVerdict v;
    v.horizon = horizon;
    v.tol = tol;
    v.minimal = s.flags().minimal;
    for (std::size_t bi = 0; bi < nb; ++bi) {
        BetaEvidence e;
        e.beta = beta_grid[bi];
        e.horizon = horizon;
        // any seed that holds wins, then any that fails, else inconclusive
        int chosen = -1;
        for (Verdict want : {Verdict::holds, Verdict::fails, Verdict::inconclusive}) {
            for (std::size_t si = 0; si < seeds.size() && chosen < 0; ++si)
                if (results[bi * seeds.size() + si].verdict == want) chosen = static_cast<int>(si);
            if (chosen >= 0) break;
        }
        const auto& r = results[bi * seeds.size() + static_cast<std::size_t>(chosen)];
        e.verdict = e.beta == 0.0 ? Verdict::holds : r.verdict;
        e.tail_max_forward = r.forward.tail_max;
        e.tail_max_backward = r.backward.tail_max;
        e.seed = chosen;
        v.evidence.push_back(e);
    }

    constexpr std::array<SpectrumClass, 4> classes{SpectrumClass::ZeroOnly, SpectrumClass::NonnegRay, SpectrumClass::NonposRay,
                                                   SpectrumClass::FullLine};
    auto predicts = [](SpectrumClass c, double b) {
        switch (c) {
            case SpectrumClass::ZeroOnly: return b == 0.0;
            case SpectrumClass::NonnegRay: return b >= 0.0;
            case SpectrumClass::NonposRay: return b <= 0.0;
            default: return true;
        }
    };
    v.mismatch = std::numeric_limits<double>::infinity();
    for (auto c : classes) {
        double score = 0;
        for (const auto& e : v.evidence) {
            if (e.verdict == Verdict::inconclusive)
                score += 0.5;
            else if ((e.verdict == Verdict::holds) != predicts(c, e.beta))
                score += 1.0;
        }
        if (score < v.mismatch) {
            v.mismatch = score;
            v.classification = c;
        }
    }
    if (v.mismatch > 0) v.notes.push_back("best fit leaves " + std::to_string(v.mismatch) + " mismatched grid points");
    if (v.minimal && (v.classification == SpectrumClass::NonnegRay || v.classification == SpectrumClass::NonposRay))
        v.notes.push_back("horizon artifact: contradicts minimal dichotomy");
    if (s.flags().uniquely_ergodic) {
        std::optional<double> mean = f->known_invariant_mean(s);
        if (!mean && s.flags().invariant_measure_known) mean = s.integrate_invariant([&](const Point& p) { return f->eval(p); });
        if (mean) {
            v.invariant_mean = *mean;
            SpectrumClass expected = std::abs(*mean) <= tol ? SpectrumClass::FullLine : SpectrumClass::ZeroOnly;
            if (expected != v.classification)
                v.notes.push_back(std::string("invariant mean predicts ") + to_string(expected) + " but the scan found " +
                                  to_string(v.classification));
        }
    }
    return v;
}

namespace {

struct WindowSearch {
    const OrbitSumTable& t;
    std::vector<double> logA;  // log sum_{k=0}^{m-1} e^{beta S_k}, index m
    std::vector<double> logB;  // log sum_{k=-n}^{-1} e^{beta S_k}, index n

    WindowSearch(const OrbitSumTable& table, std::int64_t H) : t(table) {
        logA.assign(static_cast<std::size_t>(H + 1), kNegInf);
        logB.assign(static_cast<std::size_t>(H + 1), kNegInf);
        for (std::int64_t m = 1; m <= H; ++m)
            logA[static_cast<std::size_t>(m)] = log_add(logA[static_cast<std::size_t>(m - 1)], t.beta_S(m - 1));
        for (std::int64_t n = 1; n <= H; ++n)
            logB[static_cast<std::size_t>(n)] = log_add(logB[static_cast<std::size_t>(n - 1)], t.beta_S(-n));
    }

    double log_ratio(std::int64_t n, std::int64_t m) const {
        return log_add(t.beta_S(-n), t.beta_S(m)) -
               log_add(logA[static_cast<std::size_t>(m)], logB[static_cast<std::size_t>(n)]);
    }
};

// Latest index attaining the minimum of beta S over the range (the last record minimum).
std::int64_t last_record_min(const OrbitSumTable& t, std::int64_t from, std::int64_t to, int sign) {
    std::int64_t best = from;
    double v = t.beta_S(sign * from);
    for (std::int64_t k = from + 1; k <= to; ++k) {
        double w = t.beta_S(sign * k);
        if (w <= v) {
            v = w;
            best = k;
        }
    }
    return best;
}

}  // namespace

ConformalReport hopf_construct(const DynSystem& s, PotentialPtr f, const Point& x, double beta, double ratio_tol,
                               std::int64_t max_horizon, const std::vector<TestFunction>& tests) {
    if (!(ratio_tol > 0)) throw InvalidArgument("ratio tolerance must be positive");
    if (max_horizon < 1) throw InvalidArgument("max_horizon must be positive");
    ConformalReport rep;
    rep.ratio_tol = ratio_tol;

    // A periodic F-cyclic orbit is its own window: the boundary terms cancel exactly.
    if (auto p = s.minimal_period(x, std::min<std::int64_t>(max_horizon, 1 << 20))) {
        auto t = OrbitSumTable::build(s, f, x, beta, 0, *p);
        if (std::abs(t.S(*p)) <= 1e-10) {
            rep.measure = atomic_periodic(s, *f, x, *p, beta);
            rep.chosen = {*p, 0, *p, 0.0, "period"};
            rep.schedule.push_back(rep.chosen);
            rep.converged = true;
            rep.residuals = conformality_residual(rep.measure, s, *f, beta, tests);
            return rep;
        }
    }

    auto t = OrbitSumTable::build(s, f, x, beta, max_horizon, max_horizon);
    WindowSearch w(t, max_horizon);
    std::vector<std::int64_t> horizons;
    for (std::int64_t h = std::min<std::int64_t>(1024, max_horizon);; h = std::min(2 * h, max_horizon)) {
        horizons.push_back(h);
        if (h == max_horizon) break;
    }
    WindowStep best;
    best.ratio = std::numeric_limits<double>::infinity();
    for (std::int64_t H : horizons) {
        std::int64_t n = last_record_min(t, 0, H, -1);
        std::int64_t m = last_record_min(t, 1, H, 1);
        double lr = w.log_ratio(n, m);
        std::string method = "record-minima";
        if (std::exp(lr) > ratio_tol) {
            // coordinate descent on the boundary ratio
            for (int round = 0; round < 3; ++round) {
                for (std::int64_t mm = 1; mm <= H; ++mm)
                    if (double c = w.log_ratio(n, mm); c < lr) lr = c, m = mm, method = "greedy";
                for (std::int64_t nn = 0; nn <= H; ++nn)
                    if (double c = w.log_ratio(nn, m); c < lr) lr = c, n = nn, method = "greedy";
            }
        }
        WindowStep step{H, n, m, std::exp(lr), method};
        rep.schedule.push_back(step);
        if (step.ratio < best.ratio) best = step;
        if (step.ratio <= ratio_tol) break;
    }
    rep.chosen = best;
    rep.converged = best.ratio <= ratio_tol;
    std::vector<double> logs;
    logs.reserve(static_cast<std::size_t>(best.n + best.m));
    for (std::int64_t k = -best.n; k <= best.m - 1; ++k) logs.push_back(t.beta_S(k));
    rep.measure = WeightedAtomicMeasure::on_orbit(s, x, -best.n, logs);
    rep.residuals = conformality_residual(rep.measure, s, *f, beta, tests);
    return rep;
}

WeightedAtomicMeasure atomic_periodic(const DynSystem& s, const Potential& f, const Point& x, std::int64_t p, double beta) {
    s.require_member(x);
    if (p < 1) throw InvalidArgument("period must be positive");
    auto found = s.minimal_period(x, p);
    if (!found || *found != p) throw NotPeriodic("point is not periodic with minimal period " + std::to_string(p));
    auto vals = f.orbit_values(s, x, 0, p - 1).values;
    std::vector<double> logs(static_cast<std::size_t>(p));
    CompensatedSum sum;
    for (std::int64_t j = 0; j < p; ++j) {
        logs[static_cast<std::size_t>(j)] = beta * sum.value();
        sum.add(vals[static_cast<std::size_t>(j)]);
    }
    if (std::abs(sum.value()) > 1e-10) throw NotCyclic(sum.value());
    return WeightedAtomicMeasure::on_orbit(s, x, 0, logs);
}

namespace {

TailFit fit_tail(const OrbitSumTable& t, std::int64_t N, int sign) {
    TailFit tf;
    tf.from = std::max<std::int64_t>(3, N / 10);
    tf.to = N;
    const std::size_t len = static_cast<std::size_t>(tf.to - tf.from + 1);
    std::vector<double> lx(len), ly(len), llx(len), lky(len);
    double run = kNegInf;
    // decreasing majorant: max of the log-terms from k to N
    for (std::int64_t k = tf.to; k >= tf.from; --k) {
        run = std::max(run, t.beta_S(sign * k));
        std::size_t i = static_cast<std::size_t>(k - tf.from);
        lx[i] = std::log(static_cast<double>(k));
        ly[i] = run;
        llx[i] = std::log(lx[i]);
        lky[i] = run + lx[i];
    }
    tf.fit = fit_line(lx, ly);
    // k * term ~ (log k)^{-gamma}: summable iff gamma > 1, which also separates
    // 1/(k log^2 k) from 1/k^{1+1/log k} where the power slope cannot
    tf.log_fit = fit_line(llx, lky);
    tf.decays_summably = tf.log_fit.slope + 3.0 * tf.log_fit.slope_stderr < -1.0;
    return tf;
}

double fitted_tail_mass(const TailFit& f, std::int64_t N) {
    double g = -f.log_fit.slope;
    if (g <= 1.0) return std::numeric_limits<double>::infinity();
    // sum_{k > N} e^a (log k)^{-g} / k ~ e^a (log N)^{1-g} / (g - 1)
    return std::exp(f.log_fit.intercept + (1.0 - g) * std::log(std::log(static_cast<double>(N)))) / (g - 1.0);
}

}  // namespace

std::variant<SummableMeasure, Divergent> atomic_summable(const DynSystem& s, PotentialPtr f, const Point& x, double beta,
                                                          std::int64_t N) {
    if (N < 100) throw InvalidArgument("atomic_summable needs N >= 100");
    if (s.minimal_period(x, std::min<std::int64_t>(2 * N, 1 << 20)))
        throw InvalidArgument("atomic_summable needs a non-periodic point");
    return atomic_summable(OrbitSumTable::build(s, std::move(f), x, beta, N, N), N);
}

std::variant<SummableMeasure, Divergent> atomic_summable(const OrbitSumTable& t, std::int64_t N) {
    if (N < 100 || N > t.back() || N > t.fwd()) throw InvalidArgument("atomic_summable window must lie in the table");
    TailFit fw = fit_tail(t, N, 1), bw = fit_tail(t, N, -1);
    double logZ = log_partition(t, -N, N);
    if (!fw.decays_summably || !bw.decays_summably) {
        Divergent d;
        d.forward = fw;
        d.backward = bw;
        d.log_partition = logZ;
        d.N = N;
        d.reason = std::string("terms e^{beta S_k} are not summable on the ") +
                   (!fw.decays_summably && !bw.decays_summably ? "forward and backward" : !fw.decays_summably ? "forward" : "backward") +
                   " side (fitted log-log exponents " + std::to_string(fw.log_fit.slope) + ", " +
                   std::to_string(bw.log_fit.slope) + ")";
        return d;
    }
    SummableMeasure sm;
    sm.forward = fw;
    sm.backward = bw;
    sm.N = N;
    sm.tail_mass = (fitted_tail_mass(fw, N) + fitted_tail_mass(bw, N)) / std::exp(logZ);
    std::vector<double> logs;
    logs.reserve(static_cast<std::size_t>(2 * N + 1));
    for (std::int64_t k = -N; k <= N; ++k) logs.push_back(t.beta_S(k));
    sm.measure = WeightedAtomicMeasure::on_orbit(t.system(), t.base(), -N, logs);
    return sm;
}

DensityMeasure coboundary_conformal_density(PotentialPtr h, const DynSystem& s, double beta, std::size_t grid) {
    if (!h) throw InvalidArgument("coboundary density needs a transfer function");
    return DensityMeasure::build(s, [h, beta](const Point& p) { return beta * h->eval(p); }, grid,
                                 "e^{beta H} / Z against the invariant measure");
}

InvariantBracket invariant_bracket(const DynSystem& s, PotentialPtr f, const std::vector<Point>& seeds, std::int64_t horizon,
                                   double tol) {
    if (seeds.empty()) throw InvalidArgument("invariant_bracket needs seeds");
    if (horizon < 1) throw InvalidArgument("horizon must be positive");
    InvariantBracket b;
    for (const auto& x : seeds) {
        CompensatedSum c;
        for (double v : f->orbit_values(s, x, 0, horizon - 1).values) c.add(v);
        b.seed_means.push_back(c.value() / static_cast<double>(horizon));
    }
    auto hi = std::max_element(b.seed_means.begin(), b.seed_means.end());
    auto lo = std::min_element(b.seed_means.begin(), b.seed_means.end());
    b.mean_plus = *hi;
    b.mean_minus = *lo;
    b.seed_plus = static_cast<int>(hi - b.seed_means.begin());
    b.seed_minus = static_cast<int>(lo - b.seed_means.begin());
    if (b.mean_minus > tol || b.mean_plus < -tol)
        throw BracketFailed("bracket failed: invariant means lie in [" + std::to_string(b.mean_minus) + ", " +
                            std::to_string(b.mean_plus) + "], one-signed");
    double spread = b.mean_plus - b.mean_minus;
    b.weight = spread <= tol ? 0.5 : std::clamp(-b.mean_minus / spread, 0.0, 1.0);
    return b;
}

}  // namespace conflab
