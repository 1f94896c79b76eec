#include "conflab/kms_finite.hpp"

#include <cmath>
#include <numbers>

#include "conflab/errors.hpp"

namespace conflab {

CyclicCheck check_f_cyclic(const std::vector<double>& f_values, double tol) {
    CompensatedSum s;
    for (double v : f_values) s.add(v);
    return {std::abs(s.value()) <= tol, s.value()};
}

FiniteOrbitModel::FiniteOrbitModel(std::vector<double> f_values) : f_(std::move(f_values)) {
    if (f_.empty()) throw InvalidArgument("finite orbit model needs p >= 1");
    h_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(f_.size()));
    CompensatedSum s;
    for (std::size_t j = 1; j < f_.size(); ++j) {
        s.add(f_[j - 1]);
        h_(static_cast<Eigen::Index>(j)) = -s.value();
    }
}

FiniteOrbitModel FiniteOrbitModel::from_orbit(const DynSystem& s, const Potential& f, const Point& x) {
    auto p = s.minimal_period(x);
    if (!p) throw NotPeriodic("finite orbit model needs a periodic point");
    return FiniteOrbitModel(f.orbit_values(s, x, 1, *p).values);
}

CMatrix FiniteOrbitModel::unitary(std::complex<double> z) const {
    const Eigen::Index n = p();
    CMatrix u = CMatrix::Zero(n, n);
    u(0, n - 1) += z;
    for (Eigen::Index j = 0; j + 1 < n; ++j) u(j + 1, j) = 1.0;
    return u;
}

std::complex<double> GibbsState::operator()(const CMatrix& x) const {
    std::complex<double> acc = 0;
    for (Eigen::Index j = 0; j < weights_.size(); ++j) acc += weights_(j) * x(j, j);
    return acc;
}

GibbsState gibbs_state(const FiniteOrbitModel& model, double beta) {
    auto c = model.cyclic();
    if (!c.cyclic) throw NotCyclic(c.defect);
    std::vector<double> logs(static_cast<std::size_t>(model.p()));
    for (int j = 0; j < model.p(); ++j) logs[static_cast<std::size_t>(j)] = -beta * model.hamiltonian_diagonal()(j);
    double z = log_sum_exp(logs);
    Eigen::VectorXd w(model.p());
    for (int j = 0; j < model.p(); ++j) w(j) = std::exp(logs[static_cast<std::size_t>(j)] - z);
    return GibbsState(beta, w);
}

double kms_residual(const FiniteOrbitModel& model, const Eigen::VectorXd& state_weights, double beta, const CMatrix& a,
                    const CMatrix& b) {
    const auto& h = model.hamiltonian_diagonal();
    // alpha_{i beta}(a) = e^{-beta H} a e^{beta H}, entrywise for diagonal H
    CMatrix shifted = a;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) shifted(i, j) *= std::exp(-beta * (h(i) - h(j)));
    GibbsState w(beta, state_weights);
    return std::abs(w(a * b) - w(b * shifted));
}

double kms_residual(const FiniteOrbitModel& model, double beta, const CMatrix& a, const CMatrix& b) {
    return kms_residual(model, gibbs_state(model, beta).weights(), beta, a, b);
}

std::complex<double> diagonal_state_eval(const Measure& m, const std::function<double(const Point&)>& f, std::int64_t n) {
    if (n != 0) return 0.0;
    return integrate(m, f);
}

std::complex<double> face_state_eval(const CircleFaceState& face, const std::vector<double>& f_values, std::int64_t n) {
    const int p = face.model.p();
    if (static_cast<int>(f_values.size()) != p) throw InvalidArgument("f must have one value per orbit point");
    auto tau = gibbs_state(face.model, face.beta);
    std::complex<double> acc = 0;
    for (const auto& [t, w] : face.circle_atoms) {
        const std::complex<double> z = std::polar(1.0, 2.0 * std::numbers::pi * t);
        CMatrix u = face.model.unitary(z);
        if (n < 0) u = u.adjoint().eval();
        CMatrix power = CMatrix::Identity(p, p);
        for (std::int64_t i = 0; i < std::abs(n); ++i) power = (power * u).eval();
        CMatrix x = power;
        for (int j = 0; j < p; ++j) x.row(j) *= f_values[static_cast<std::size_t>(j)];
        acc += w * tau(x);
    }
    return acc;
}

NonInjectivityWitness non_injectivity_witness(const FiniteOrbitModel& model, double beta) {
    CircleFaceState one{model, beta, {{0.0, 1.0}}};
    CircleFaceState minus{model, beta, {{0.5, 1.0}}};
    std::vector<double> ones(static_cast<std::size_t>(model.p()), 1.0);
    NonInjectivityWitness w;
    w.diagonal_first = face_state_eval(one, ones, 0).real();
    w.diagonal_second = face_state_eval(minus, ones, 0).real();
    w.period_first = face_state_eval(one, ones, model.p());
    w.period_second = face_state_eval(minus, ones, model.p());
    // diagonal parts agree for every f, since n = 0 never sees the circle measure
    bool same = true;
    for (int j = 0; j < model.p(); ++j) {
        std::vector<double> e(static_cast<std::size_t>(model.p()), 0.0);
        e[static_cast<std::size_t>(j)] = 1.0;
        same = same && std::abs(face_state_eval(one, e, 0) - face_state_eval(minus, e, 0)) <= 1e-14;
    }
    w.same_conformal_measure = same;
    w.distinct_states = std::abs(w.period_first - w.period_second) > 0.5;
    return w;
}

}  // namespace conflab
