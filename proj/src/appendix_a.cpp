#include "conflab/appendix_a.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "conflab/errors.hpp"

namespace conflab {

namespace {

// log g(n) - log g(n+1) for g(n) = 1/((n+1) log^2(n+2)), written with log1p to keep digits.
double log_g_drop(double n) {
    double l2 = std::log(n + 2);
    return std::log1p(1.0 / (n + 1)) + 2.0 * std::log1p(std::log1p(1.0 / (n + 2)) / l2);
}

double tent(double x, double center, double half_width, double height) {
    double dist = circle_distance(x, center);
    return dist >= half_width ? 0.0 : height * (1.0 - dist / half_width);
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

std::shared_ptr<const AppendixAPotential> AppendixAPotential::build(const DynSystem& rotation, std::vector<double> base_points,
                                                                    std::vector<SpectrumTarget> targets,
                                                                    const AppendixAOptions& options) {
    if (!rotation.is_rotation() || rotation.is_reversed())
        throw InvalidArgument("appendix_a construction is implemented for circle rotations");
    if (base_points.empty()) throw InvalidArgument("appendix_a needs at least one base point");
    if (base_points.size() != targets.size()) throw InvalidArgument("one spectrum target per base point is required");
    for (const auto& t : targets)
        if (!(t.beta < 0)) throw InvalidArgument("spectrum targets need beta_p < 0");
    if (options.depth < 0) throw InvalidArgument("depth must be nonnegative");
    if (options.onset < 0) throw InvalidArgument("onset shift must be nonnegative");
    for (auto& x : base_points) x = frac(x);

    std::shared_ptr<AppendixAPotential> f(
        new AppendixAPotential(rotation, std::move(base_points), std::move(targets), options));
    f->validate_orbits();
    f->choose_N();
    f->build_arcs();
    f->verify();
    return f;
}

double AppendixAPotential::c(std::int64_t n) const {
    const double s = options_.onset;
    double log_c = -(std::log(n + s + 1) - std::log(s + 1)) - 2.0 * (std::log(std::log(n + s + 2)) - std::log(std::log(s + 2)));
    return std::exp(log_c);
}

double AppendixAPotential::d(std::int64_t n) const {
    const double s = options_.onset;
    return (1.0 + s) / (static_cast<double>(n) + 1.0 + s);
}

double AppendixAPotential::t(std::int64_t n) const { return 1.0 + 1.0 / std::log(static_cast<double>(n) + 3.0); }

double AppendixAPotential::a(int p, std::int64_t i) const {
    const auto& tg = targets_.at(static_cast<std::size_t>(p));
    const double m = static_cast<double>(i) + options_.onset;
    // (log x_{i+1} - log x_i)/beta for x = c (closed) or d (open)
    double drop = tg.closed ? log_g_drop(m) : std::log1p(1.0 / (m + 1.0));
    return -drop / tg.beta;
}

double AppendixAPotential::b(int p, std::int64_t i) const { return t(i) * a(p, i); }

double AppendixAPotential::S(std::int64_t i) const {
    double s = 0;
    for (int p = 0; p < point_count(); ++p) s = std::max(s, b(p, i));
    return s;
}

void AppendixAPotential::validate_orbits() const {
    for (std::size_t p = 0; p < points_.size(); ++p) {
        for (std::size_t l = p + 1; l < points_.size(); ++l) {
            for (std::int64_t i = -options_.horizon; i <= options_.horizon; ++i) {
                double y = std::get<CirclePoint>(system_.iterate(CirclePoint{points_[p]}, i)).x;
                if (circle_distance(y, points_[l]) <= 1e-12) {
                    std::ostringstream os;
                    os << "base points " << p << " and " << l << " meet at iterate " << i;
                    throw ConstraintViolation("orbit collision", os.str());
                }
            }
        }
    }
}

void AppendixAPotential::choose_N() {
    const int q = point_count();
    const std::int64_t limit = options_.search_limit;
    std::int64_t prev = -1;
    double rhs_S = 0;
    for (int n = 0; n <= options_.depth + 1; ++n) {
        rhs_S += (2.0 * n + 1.0) * S(n);
        std::int64_t N = std::max<std::int64_t>(3 * (n + 1), prev + 1);
        const double bound = std::ldexp(1.0, -n);
        for (int p = 0; p < q; ++p) {
            std::int64_t j = 0;
            while (b(p, j) >= bound) {
                if (++j > limit) throw ConstraintViolation("(a_n)", "b_j never drops below 2^-" + std::to_string(n));
            }
            N = std::max(N, j + 1);
        }
        bool capped = false;
        for (int p = 0; p < q && !capped; ++p) {
            double rhs = rhs_S;
            for (int k = 0; k <= n; ++k) rhs += a(p, k);
            double lhs = 0;
            std::int64_t j = n + 1;
            while (lhs < rhs && j < limit) {
                lhs += b(p, j) - a(p, j);
                ++j;
            }
            if (lhs < rhs) {
                if (n <= options_.depth)
                    throw ConstraintViolation("(b_n)", "no admissible N_" + std::to_string(n) + " below " +
                                                           std::to_string(limit) + "; increase the onset shift");
                capped = true;
                N = limit;
            } else {
                N = std::max(N, j);
            }
        }
        if (n == options_.depth + 1) last_capped_ = capped;
        N_.push_back(N);
        prev = N;
    }
    exact_window_ = std::min(N_.back(), options_.exact_window_cap);
}

void AppendixAPotential::build_arcs() {
    const int q = point_count();
    arcs_.assign(static_cast<std::size_t>(options_.depth + 1), std::vector<ArcPair>(static_cast<std::size_t>(q)));
    auto orbit = [this](int l, std::int64_t i) { return std::get<CirclePoint>(system_.iterate(CirclePoint{points_[l]}, i)).x; };

    for (int n = 0; n <= options_.depth; ++n) {
        const std::int64_t h = N_[n] + 2 * n + 1;
        for (int p = 0; p < q; ++p) {
            const double cp = orbit(p, n), cm = orbit(p, -n - 1);
            double r = circle_distance(cp, cm) / 3.0;
            double nearest = std::numeric_limits<double>::infinity();
            for (int l = 0; l < q; ++l) {
                for (std::int64_t i = -h; i <= h; ++i) {
                    if (l == p && (i == n || i == -n - 1)) continue;
                    double y = orbit(l, i);
                    nearest = std::min({nearest, circle_distance(cp, y), circle_distance(cm, y)});
                }
            }
            if (nearest <= 1e-15)
                throw ConstraintViolation("orbit collision", "an orbit point coincides with a centre at level " + std::to_string(n));
            r = std::min(r, nearest / 3.0);
            for (int i = 0; i < n; ++i) {
                for (int l = 0; l < q; ++l) {
                    const ArcPair& w = arcs_[i][l];
                    bool inside = false;
                    for (double c0 : {cp, cm})
                        for (double c1 : {w.center_plus, w.center_minus})
                            if (circle_distance(c0, c1) <= w.radius) inside = true;
                    if (inside) continue;  // not part of K_n^p
                    for (double c0 : {cp, cm})
                        for (double c1 : {w.center_plus, w.center_minus})
                            r = std::min(r, (circle_distance(c0, c1) - w.radius) / 3.0);
                }
            }
            if (!(r > 1e-13))
                throw ConstraintViolation("radius underflow", "arc radius " + fmt(r) + " at level " + std::to_string(n));
            arcs_[n][p] = ArcPair{cp, cm, r, r / 2.0, b(p, n)};
        }
    }
}

void AppendixAPotential::verify() {
    const int q = point_count();
    const int depth = options_.depth;
    const std::int64_t W = options_.verify_window;
    auto orbit = [this](int l, std::int64_t i) { return std::get<CirclePoint>(system_.iterate(CirclePoint{points_[l]}, i)).x; };
    auto add = [this](std::string name, double margin, std::string detail) {
        certificate_.push_back({std::move(name), margin > 0, margin, std::move(detail)});
    };

    // Sequence conditions on the checked range.
    {
        const std::int64_t L = N_[depth] + W + 2;
        double m_pos = std::numeric_limits<double>::infinity(), m_order = m_pos, m_mono = m_pos;
        for (int p = 0; p < q; ++p) {
            for (std::int64_t i = 0; i < L; ++i) {
                m_pos = std::min(m_pos, a(p, i));
                m_order = std::min(m_order, b(p, i) - a(p, i));
                m_mono = std::min(m_mono, b(p, i) - b(p, i + 1));
            }
        }
        add("sequences: a_i > 0", m_pos, "i < " + std::to_string(L));
        add("sequences: a_i < b_i", m_order, "t_i > 1, i < " + std::to_string(L));
        add("sequences: b_i decreasing", m_mono, "i < " + std::to_string(L));
        double btail = 0;
        for (int p = 0; p < q; ++p) btail = std::max(btail, b(p, N_[depth + 1]));
        add("sequences: b_i -> 0", std::ldexp(1.0, -depth) - btail, "b at N_{d+1} = " + fmt(btail));
    }

    for (int n = 0; n <= depth; ++n) {
        const std::string tag = " n=" + std::to_string(n);
        add("N_n >= 3(n+1)" + tag, static_cast<double>(N_[n] - 3 * (n + 1)) + 0.5, "N_n = " + std::to_string(N_[n]));
        if (n > 0) add("N_n increasing" + tag, static_cast<double>(N_[n] - N_[n - 1]), "");

        const double bound = std::ldexp(1.0, -n);
        double ma = std::numeric_limits<double>::infinity();
        for (int p = 0; p < q; ++p)
            for (std::int64_t j = N_[n] - 1; j <= N_[n] - 1 + W; ++j) ma = std::min(ma, bound - b(p, j));
        add("(a_n)" + tag, ma, "b_j < 2^-n for j in [N_n - 1, N_n - 1 + " + std::to_string(W) + "]");

        double rhs_S = 0;
        for (int i = 0; i <= n; ++i) rhs_S += (2.0 * i + 1.0) * S(i);
        double mb = std::numeric_limits<double>::infinity(), minc = mb;
        for (int p = 0; p < q; ++p) {
            double lhs = 0, asum = 0;
            for (std::int64_t k = n + 1; k <= N_[n] - 1; ++k) lhs += b(p, k);
            for (std::int64_t k = 0; k <= N_[n] - 1; ++k) asum += a(p, k);
            for (std::int64_t j = N_[n]; j <= N_[n] + W; ++j) {
                mb = std::min(mb, lhs - asum - rhs_S);
                lhs += b(p, j);
                asum += a(p, j);
                minc = std::min(minc, b(p, j) - a(p, j));
            }
        }
        add("(b_n) windowed" + tag, mb, "j in [N_n, N_n + " + std::to_string(W) + "]");
        add("(b_n) all j" + tag, std::min(mb, minc),
            "left minus right side is increasing in j because b_j > a_j for every j");

        for (int p = 0; p < q; ++p) {
            const ArcPair& A = arcs_[n][p];
            const std::string pt = tag + " p=" + std::to_string(p);
            add("(1_n)" + pt, circle_distance(A.center_plus, A.center_minus) - 2 * A.radius, "V and phi^{-2n-1}V disjoint");
            add("tent inside V" + pt, A.radius - A.tent_half_width, "");
            add("integral of f_n^p" + pt, 1.0, "both tents have area b_n^p * half_width; difference is exactly 0");

            double m3 = std::numeric_limits<double>::infinity();
            for (int l = 0; l < q; ++l)
                for (std::int64_t i = -N_[n]; i <= N_[n]; ++i) {
                    if (l == p && (i == n || i == -n - 1)) continue;
                    double y = orbit(l, i);
                    m3 = std::min({m3, circle_distance(y, A.center_plus) - A.radius, circle_distance(y, A.center_minus) - A.radius});
                }
            add("(3_n)" + pt, m3, "orbit points |i| <= N_n avoid closed W_n^p");

            for (int l = p + 1; l < q; ++l) {
                const ArcPair& B = arcs_[n][l];
                double m2 = std::numeric_limits<double>::infinity();
                for (double c0 : {A.center_plus, A.center_minus})
                    for (double c1 : {B.center_plus, B.center_minus})
                        m2 = std::min(m2, circle_distance(c0, c1) - A.radius - B.radius);
                add("(2_n)" + pt + " vs " + std::to_string(l), m2, "W_n^p, W_n^l disjoint");
            }

            for (int i = 0; i < n; ++i) {
                bool hit = false;
                for (int l = 0; l < q; ++l)
                    for (double c0 : {A.center_plus, A.center_minus})
                        for (double c1 : {arcs_[i][l].center_plus, arcs_[i][l].center_minus})
                            if (circle_distance(c0, c1) <= arcs_[i][l].radius) hit = true;
                if (hit) {
                    add("(4_n)" + pt + " i=" + std::to_string(i), 1.0, "vacuous: a centre lies in an earlier W");
                    continue;
                }
                double m4 = std::numeric_limits<double>::infinity();
                for (int l = 0; l < q; ++l)
                    for (double c0 : {A.center_plus, A.center_minus})
                        for (double c1 : {arcs_[i][l].center_plus, arcs_[i][l].center_minus})
                            m4 = std::min(m4, circle_distance(c0, c1) - A.radius - arcs_[i][l].radius);
                add("(4_n)" + pt + " i=" + std::to_string(i), m4, "W_n^p misses closed W_i");
            }
        }
    }
}

bool AppendixAPotential::certified() const {
    return std::all_of(certificate_.begin(), certificate_.end(), [](const ConditionCheck& c) { return c.passed; });
}

double AppendixAPotential::level_eval(int n, double x) const {
    double v = 0;
    for (const auto& A : arcs_.at(static_cast<std::size_t>(n)))
        v += tent(x, A.center_plus, A.tent_half_width, A.height) - tent(x, A.center_minus, A.tent_half_width, A.height);
    return v;
}

double AppendixAPotential::eval(double x) const {
    double v = 0;
    for (int n = 0; n <= options_.depth; ++n) v += level_eval(n, x);
    return v;
}

std::optional<int> AppendixAPotential::base_point_index(double x) const {
    for (int p = 0; p < point_count(); ++p)
        if (circle_distance(x, points_[p]) == 0.0) return p;
    return std::nullopt;
}

double AppendixAPotential::completed_value(int p, std::int64_t k) const {
    if (k > exact_window_ || -k > exact_window_) throw InvalidArgument("index outside the exact orbit window");
    double v = eval(std::get<CirclePoint>(system_.iterate(CirclePoint{points_.at(static_cast<std::size_t>(p))}, k)).x);
    if (k > options_.depth) v += b(p, k);
    if (-k - 1 > options_.depth) v -= b(p, -k - 1);
    return v;
}

double AppendixAPotential::tail_bound() const { return S(options_.depth + 1) + std::ldexp(1.0, -options_.depth + 1); }

SandwichReport AppendixAPotential::sandwich(int p, std::int64_t m_max) const {
    SandwichReport r;
    r.point = p;
    r.m_max = m_max;
    r.worst_forward_margin = r.worst_backward_margin = std::numeric_limits<double>::infinity();
    const double x = points_.at(static_cast<std::size_t>(p));
    auto value = [&](std::int64_t k) {
        if (std::abs(k) <= exact_window_) return completed_value(p, k);
        r.used_completed_values = false;
        return eval(std::get<CirclePoint>(system_.iterate(CirclePoint{x}, k)).x);
    };
    CompensatedSum fsum, asum, bsum, gsum, asum_prev, bsum_prev;
    fsum.add(value(0));
    asum.add(a(p, 0));
    bsum.add(b(p, 0));
    for (std::int64_t m = 1; m <= m_max; ++m) {
        fsum.add(value(m));
        asum.add(a(p, m));
        bsum.add(b(p, m));
        double tol = 1e-9 * (1.0 + bsum.value());
        double margin = std::min(fsum.value() - asum.value(), bsum.value() - fsum.value());
        if (margin < r.worst_forward_margin) {
            r.worst_forward_margin = margin;
            r.worst_forward_m = m;
        }
        if (margin < -tol) r.forward_holds = false;

        // backward: -sum_{i<m} b <= sum_{i=1}^m F(phi^{-i}x) <= -sum_{i<m} a
        gsum.add(value(-m));
        asum_prev.add(a(p, m - 1));
        bsum_prev.add(b(p, m - 1));
        double bmargin = std::min(gsum.value() + bsum_prev.value(), -asum_prev.value() - gsum.value());
        if (bmargin < r.worst_backward_margin) {
            r.worst_backward_margin = bmargin;
            r.worst_backward_m = m;
        }
        if (bmargin < -tol) r.backward_holds = false;
    }
    return r;
}

}  // namespace conflab
