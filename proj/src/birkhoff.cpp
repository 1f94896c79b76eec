#include "conflab/birkhoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "conflab/errors.hpp"

namespace conflab {

double birkhoff_sum(const DynSystem& s, const Potential& f, const Point& x, std::int64_t k) {
    if (k == 0) return 0.0;
    CompensatedSum sum;
    if (k > 0) {
        for (double v : f.orbit_values(s, x, 0, k - 1).values) sum.add(v);
        return sum.value();
    }
    for (double v : f.orbit_values(s, x, k, -1).values) sum.add(v);
    return -sum.value();
}

std::shared_ptr<OrbitSumTable::Data> OrbitSumTable::finish(std::shared_ptr<Data> d) {
    const std::int64_t N = d->n_back, M = d->m_fwd;
    d->s.assign(static_cast<std::size_t>(N + M + 2), 0.0);
    CompensatedSum fwd;
    for (std::int64_t k = 0; k <= M; ++k) {
        fwd.add(d->f[static_cast<std::size_t>(k + N)]);
        d->s[static_cast<std::size_t>(k + 1 + N)] = fwd.value();
    }
    CompensatedSum bwd;
    for (std::int64_t k = 1; k <= N; ++k) {
        bwd.add(d->f[static_cast<std::size_t>(-k + N)]);
        d->s[static_cast<std::size_t>(-k + N)] = -bwd.value();
    }
    return d;
}

OrbitSumTable OrbitSumTable::build(const DynSystem& s, PotentialPtr f, const Point& x, double beta, std::int64_t n_back,
                                   std::int64_t m_fwd) {
    if (n_back < 0 || m_fwd < 0) throw InvalidArgument("table window lengths must be nonnegative");
    if (!f) throw InvalidArgument("table needs a potential");
    s.require_member(x);
    auto d = std::make_shared<Data>(Data{s, f, x, n_back, m_fwd, {}, {}, std::nullopt});
    OrbitValues v = f->orbit_values(s, x, -n_back, m_fwd);
    d->f = std::move(v.values);
    d->exact_window = v.exact_window;
    return OrbitSumTable(finish(std::move(d)), beta);
}

OrbitSumTable OrbitSumTable::extend(std::int64_t n_back, std::int64_t m_fwd) const {
    const std::int64_t N = d_->n_back, M = d_->m_fwd;
    if (n_back < N || m_fwd < M) throw InvalidArgument("extension must contain the current window");
    auto d = std::make_shared<Data>(*d_);
    d->n_back = n_back;
    d->m_fwd = m_fwd;
    d->f.assign(static_cast<std::size_t>(n_back + m_fwd + 1), 0.0);
    std::copy(d_->f.begin(), d_->f.end(), d->f.begin() + (n_back - N));
    if (n_back > N) {
        OrbitValues v = d_->potential->orbit_values(d_->system, d_->x, -n_back, -N - 1);
        std::copy(v.values.begin(), v.values.end(), d->f.begin());
    }
    if (m_fwd > M) {
        OrbitValues v = d_->potential->orbit_values(d_->system, d_->x, M + 1, m_fwd);
        std::copy(v.values.begin(), v.values.end(), d->f.begin() + (n_back + M + 1));
    }
    return OrbitSumTable(finish(std::move(d)), beta_);
}

OrbitSumTable OrbitSumTable::with_beta(double beta) const { return OrbitSumTable(d_, beta); }

double OrbitSumTable::S(std::int64_t k) const {
    if (k < -d_->n_back || k > d_->m_fwd + 1) throw InvalidArgument("S_k requested outside the cached window");
    return d_->s[static_cast<std::size_t>(k + d_->n_back)];
}

double OrbitSumTable::F(std::int64_t k) const {
    if (k < -d_->n_back || k > d_->m_fwd) throw InvalidArgument("F(phi^k x) requested outside the cached window");
    return d_->f[static_cast<std::size_t>(k + d_->n_back)];
}

double OrbitSumTable::telescoping_residual() const {
    double worst = 0;
    for (std::int64_t k = -d_->n_back; k <= d_->m_fwd; ++k) worst = std::max(worst, std::abs(S(k + 1) - S(k) - F(k)));
    return worst;
}

CesaroStats cesaro_limsup_estimate(const OrbitSumTable& t, Direction side) {
    return cesaro_limsup_estimate(t, side, side == Direction::forward ? t.fwd() + 1 : t.back());
}

CesaroStats cesaro_limsup_estimate(const OrbitSumTable& t, Direction side, std::int64_t horizon) {
    const std::int64_t available = side == Direction::forward ? t.fwd() + 1 : t.back();
    if (horizon < 10) throw InvalidArgument("Cesaro estimate needs a horizon of at least 10");
    if (horizon > available) throw InvalidArgument("Cesaro horizon exceeds the table");
    CesaroStats c;
    c.side = side;
    c.horizon = horizon;
    c.beta = t.beta();
    c.averages.resize(static_cast<std::size_t>(horizon));
    for (std::int64_t k = 1; k <= horizon; ++k) {
        // S_{-k} = -sum_{i=1}^k F(phi^{-i} x), so both sides are beta S_{+-k}/k
        double s = side == Direction::forward ? t.S(k) : t.S(-k);
        c.averages[static_cast<std::size_t>(k - 1)] = t.beta() * s / static_cast<double>(k);
    }
    c.tail_max = -std::numeric_limits<double>::infinity();
    for (std::int64_t k = (horizon + 1) / 2; k <= horizon; ++k)
        c.tail_max = std::max(c.tail_max, c.averages[static_cast<std::size_t>(k - 1)]);
    return c;
}

double log_partition(const OrbitSumTable& t, std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw InvalidArgument("empty partition window");
    LogSumExp acc;
    for (std::int64_t k = lo; k <= hi; ++k) acc.add(t.beta() * t.S(k));
    return acc.value();
}

double sup_partial_sums(const OrbitSumTable& t) { return sup_partial_sums(t, t.fwd()); }

double sup_partial_sums(const OrbitSumTable& t, std::int64_t horizon) {
    if (t.fwd() < 1 && horizon >= 1) throw InvalidArgument("sup_partial_sums needs a forward window");
    double worst = 0;
    for (std::int64_t n = 0; n <= horizon; ++n) worst = std::max(worst, std::abs(t.S(n + 1)));
    return worst;
}

}  // namespace conflab
