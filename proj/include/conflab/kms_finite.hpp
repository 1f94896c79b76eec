#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "conflab/measure.hpp"

namespace conflab {

using CMatrix = Eigen::MatrixXcd;

struct CyclicCheck {
    bool cyclic = false;
    double defect = 0;  // sum of the values
};

CyclicCheck check_f_cyclic(const std::vector<double>& f_values, double tol = 1e-12);

// Matrix model of a p-periodic orbit: F_values[i-1] = F(phi^i x), i = 1..p, and
// H = -sum_{j >= 2} (sum_{k < j} F(k)) e_{jj}.
class FiniteOrbitModel {
public:
    explicit FiniteOrbitModel(std::vector<double> f_values);
    // F(phi^i x), i = 1..p, read off a periodic point of s.
    static FiniteOrbitModel from_orbit(const DynSystem& s, const Potential& f, const Point& x);

    int p() const noexcept { return static_cast<int>(f_.size()); }
    const std::vector<double>& f_values() const noexcept { return f_; }
    const Eigen::VectorXd& hamiltonian_diagonal() const noexcept { return h_; }
    Eigen::MatrixXd hamiltonian() const { return h_.asDiagonal(); }
    // z e_{1,p} + sum_j e_{j+1,j}
    CMatrix unitary(std::complex<double> z) const;
    CyclicCheck cyclic() const { return check_f_cyclic(f_); }

private:
    std::vector<double> f_;
    Eigen::VectorXd h_;
};

class GibbsState {
public:
    GibbsState(double beta, Eigen::VectorXd weights) : beta_(beta), weights_(std::move(weights)) {}
    double beta() const noexcept { return beta_; }
    const Eigen::VectorXd& weights() const noexcept { return weights_; }
    // Tr(rho x) with rho = diag(weights)
    std::complex<double> operator()(const CMatrix& x) const;

private:
    double beta_;
    Eigen::VectorXd weights_;
};

// Tr(e^{-beta H} .) / Tr(e^{-beta H}); throws NotCyclic off F-cyclic orbits.
GibbsState gibbs_state(const FiniteOrbitModel& model, double beta);

// |w(ab) - w(b e^{-beta H} a e^{beta H})| for the Gibbs state, or for an arbitrary diagonal state.
double kms_residual(const FiniteOrbitModel& model, double beta, const CMatrix& a, const CMatrix& b);
double kms_residual(const FiniteOrbitModel& model, const Eigen::VectorXd& state_weights, double beta, const CMatrix& a,
                    const CMatrix& b);

// w_m(f U^n) = int f dm for n = 0 and 0 otherwise.
std::complex<double> diagonal_state_eval(const Measure& m, const std::function<double(const Point&)>& f, std::int64_t n);

struct CircleFaceState {
    FiniteOrbitModel model;
    double beta = 0;
    std::vector<std::pair<double, double>> circle_atoms;  // (angle t with z = e^{2 pi i t}, weight)
};

// f_values[j-1] = f(phi^j x); integrates tau_beta(diag(f) pi(U)(z)^n) against the circle atoms.
std::complex<double> face_state_eval(const CircleFaceState& face, const std::vector<double>& f_values, std::int64_t n);

struct NonInjectivityWitness {
    double diagonal_first = 0, diagonal_second = 0;  // n = 0 evaluation, f = 1
    std::complex<double> period_first, period_second;  // n = p evaluation, f = 1
    bool same_conformal_measure = false;
    bool distinct_states = false;
};

// Two Dirac circle measures (z = 1 and z = -1) give different states with the same diagonal restriction.
NonInjectivityWitness non_injectivity_witness(const FiniteOrbitModel& model, double beta);

}  // namespace conflab
