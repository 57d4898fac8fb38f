#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qplab/errors.hpp"
#include "qplab/trajectory.hpp"

namespace qplab {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

/// Finite-mode system: Hamiltonian, observed position, center-of-mass
/// operator, optional momentum, named domain projectors.  hbar = 1.
struct ModeSystem {
  MatrixXcd H;
  MatrixXcd X;
  MatrixXcd S;
  MatrixXcd P;  // optional; empty when unused
  std::map<std::string, MatrixXcd> projectors;

  Eigen::Index dim() const { return H.rows(); }

  void validate() const {
    auto hermitian = [](const MatrixXcd& A, const char* name) {
      if (A.rows() != A.cols())
        throw structural_error(std::string(name) + ": not square");
      if ((A - A.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw validation_error(std::string(name) + ": not Hermitian to 1e-12");
    };
    hermitian(H, "H");
    hermitian(X, "X");
    hermitian(S, "S");
    if (X.rows() != H.rows() || S.rows() != H.rows())
      throw structural_error("mode system: operator dimension mismatch");
    if (P.size() != 0) {
      hermitian(P, "P");
      if (P.rows() != H.rows())
        throw structural_error("mode system: P dimension mismatch");
    }
    for (const auto& [name, Pd] : projectors) {
      hermitian(Pd, ("projector " + name).c_str());
      if ((Pd * Pd - Pd).cwiseAbs().maxCoeff() > 1e-10)
        throw validation_error("projector " + name + ": not idempotent");
    }
  }
};

/// Spectral radius of a Hermitian matrix.
inline double spectral_radius(const MatrixXcd& A) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(A, Eigen::EigenvaluesOnly);
  return std::max(std::abs(es.eigenvalues().minCoeff()),
                  std::abs(es.eigenvalues().maxCoeff()));
}

/// Spectral propagation: diagonalize H once, advance coefficients by
/// phases e^{-i zeta_k t}.  Norm preserved to 1e-12.
inline std::vector<VectorXcd> evolve_linear(const ModeSystem& system,
                                            const VectorXcd& psi0,
                                            const std::vector<double>& times) {
  system.validate();
  require_time_grid(times);
  if (psi0.size() != system.dim())
    throw structural_error("evolve_linear: state dimension mismatch");
  if (std::abs(psi0.norm() - 1.0) > 1e-10)
    throw validation_error("evolve_linear: psi0 not normalized");

  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(system.H);
  const MatrixXcd& V = es.eigenvectors();
  const Eigen::VectorXd& zeta = es.eigenvalues();
  const VectorXcd coeff = V.adjoint() * psi0;

  std::vector<VectorXcd> out;
  out.reserve(times.size());
  for (double t : times) {
    VectorXcd phased(coeff.size());
    for (Eigen::Index k = 0; k < coeff.size(); ++k)
      phased[k] = coeff[k] * std::polar(1.0, -zeta[k] * t);
    out.push_back(V * phased);
  }
  return out;
}

/// values[t] = <psi(t)|Op|psi(t)>, asserted real to 1e-10.
inline Trajectory observable_trajectory(const std::vector<VectorXcd>& states,
                                        const std::vector<double>& times,
                                        const MatrixXcd& op) {
  if (states.size() != times.size())
    throw structural_error("observable_trajectory: state/time count mismatch");
  if ((op - op.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw validation_error("observable_trajectory: operator not Hermitian");
  Trajectory out;
  out.times = times;
  out.meta.generator = "observable";
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].size() != op.rows())
      throw structural_error("observable_trajectory: dimension mismatch");
    const std::complex<double> v =
        states[i].dot(op * states[i]);  // conjugates the left argument
    if (std::abs(v.imag()) > 1e-10)
      throw validation_error("observable_trajectory: imaginary residue " +
                             std::to_string(v.imag()));
    out.values.push_back(v.real());
  }
  return out;
}

/// Single-interval survival s(dt) = |P_D e^{-iH dt} psi0|^2 over a decade
/// of small dt, the fitted exponent of 1 - s(dt), and the n-peek collapsed
/// protocol (renormalizing after each projection) at fixed total time.
struct ZenoResult {
  std::vector<double> dts;
  std::vector<double> survivals;
  double fitted_exponent = 0.0;
  std::vector<std::size_t> peek_counts;
  std::vector<double> peek_survivals;  // total survival after n peeks
};

inline ZenoResult zeno_survival(const ModeSystem& system, const VectorXcd& psi0,
                                const MatrixXcd& projector, double total_time,
                                const std::vector<std::size_t>& peek_counts) {
  system.validate();
  if ((projector * psi0 - psi0).norm() > 1e-10)
    throw validation_error("zeno_survival: psi0 not supported in the domain");
  if (std::abs(psi0.norm() - 1.0) > 1e-10)
    throw validation_error("zeno_survival: psi0 not normalized");

  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(system.H);
  const MatrixXcd& V = es.eigenvectors();
  const Eigen::VectorXd& zeta = es.eigenvalues();
  const double rho = std::max(std::abs(zeta.minCoeff()),
                              std::abs(zeta.maxCoeff()));
  auto propagate = [&](const VectorXcd& psi, double t) {
    VectorXcd c = V.adjoint() * psi;
    for (Eigen::Index k = 0; k < c.size(); ++k)
      c[k] *= std::polar(1.0, -zeta[k] * t);
    return VectorXcd(V * c);
  };

  ZenoResult out;
  // dt in [1e-3, 1e-2] units of 1/rho(H): inside the Taylor regime
  const int n_pts = 12;
  std::vector<double> lx, ly;
  for (int i = 0; i < n_pts; ++i) {
    const double dt =
        std::pow(10.0, -3.0 + i / (n_pts - 1.0)) / std::max(rho, 1e-300);
    const double s = (projector * propagate(psi0, dt)).squaredNorm();
    out.dts.push_back(dt);
    out.survivals.push_back(s);
    if (1.0 - s > 0.0) {
      lx.push_back(std::log(dt));
      ly.push_back(std::log(1.0 - s));
    }
  }
  if (lx.size() >= 3) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    const double n = static_cast<double>(lx.size());
    out.fitted_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }

  out.peek_counts = peek_counts;
  for (std::size_t n_peeks : peek_counts) {
    const double step = total_time / static_cast<double>(n_peeks);
    VectorXcd psi = psi0;
    double survival = 1.0;
    for (std::size_t i = 0; i < n_peeks; ++i) {
      VectorXcd projected = projector * propagate(psi, step);
      const double p = projected.squaredNorm();
      survival *= p;
      if (p <= 0.0) break;
      psi = projected / std::sqrt(p);  // Copenhagenist collapse sub-experiment
    }
    out.peek_survivals.push_back(survival);
  }
  return out;
}

/// <psi|S^2|psi> - <psi|S|psi>^2 >= 0.
inline double compute_dispersion(const VectorXcd& psi, const MatrixXcd& s_op) {
  if (psi.size() != s_op.rows())
    throw structural_error("compute_dispersion: dimension mismatch");
  const VectorXcd sp = s_op * psi;
  const double mean = psi.dot(sp).real();
  return std::max(0.0, sp.squaredNorm() - mean * mean);
}

enum class WfeOperator { Com, Observed, Momentum };

inline std::string to_string(WfeOperator op) {
  switch (op) {
    case WfeOperator::Com: return "S";
    case WfeOperator::Observed: return "X";
    default: return "P";
  }
}

/// Nonlinear coupling w N^2 D(psi) added to the energy functional, where
/// D is the dispersion of the chosen operator.
struct WFEParams {
  double w = 0.0;
  std::size_t N = 1;
  WfeOperator op = WfeOperator::Com;

  void validate() const {
    if (!(w >= 0.0)) throw validation_error("wfe: w >= 0");
    if (N < 1) throw validation_error("wfe: N >= 1");
  }
};

inline const MatrixXcd& wfe_operator(const ModeSystem& system,
                                     const WFEParams& params) {
  switch (params.op) {
    case WfeOperator::Com: return system.S;
    case WfeOperator::Observed: return system.X;
    default:
      if (system.P.size() == 0)
        throw structural_error("wfe: momentum form requested but P is empty");
      return system.P;
  }
}

struct WfeRun {
  std::vector<double> times;
  std::vector<VectorXcd> states;
  double norm_drift = 0.0;    // max |norm - 1| along the run
  double energy_drift = 0.0;  // max |E(t) - E(0)|
};

/// Fixed-step classical RK4 on
///   i dpsi/dt = H psi + w N^2 { A^2 psi - 2 <psi|A|psi> A psi }.
/// The flow conserves the norm and the total energy functional; both are
/// monitored as accuracy gauges, never restored by renormalization.
inline WfeRun evolve_wfe(const ModeSystem& system, const WFEParams& params,
                         const VectorXcd& psi0, double dt,
                         std::size_t n_steps) {
  system.validate();
  params.validate();
  if (psi0.size() != system.dim())
    throw structural_error("evolve_wfe: state dimension mismatch");
  if (std::abs(psi0.norm() - 1.0) > 1e-10)
    throw validation_error("evolve_wfe: psi0 not normalized");

  const MatrixXcd& A = wfe_operator(system, params);
  const double coupling = params.w * static_cast<double>(params.N) *
                          static_cast<double>(params.N);
  const MatrixXcd A2 = A * A;
  const double stiffness =
      spectral_radius(system.H) + coupling * spectral_radius(A2);
  if (std::abs(dt) * stiffness >= 0.1)
    throw validation_error(
        "evolve_wfe: dt too large for the spectral radius (need dt*rho < 0.1)");

  const std::complex<double> mi(0.0, -1.0);
  auto rhs = [&](const VectorXcd& psi) {
    VectorXcd h = system.H * psi;
    if (coupling > 0.0) {
      const double a_mean = psi.dot(A * psi).real();
      h += coupling * (A2 * psi - 2.0 * a_mean * (A * psi));
    }
    return VectorXcd(mi * h);
  };
  auto energy = [&](const VectorXcd& psi) {
    double e = psi.dot(system.H * psi).real();
    if (coupling > 0.0) e += coupling * compute_dispersion(psi, A);
    return e;
  };

  WfeRun out;
  out.times.reserve(n_steps + 1);
  out.states.reserve(n_steps + 1);
  VectorXcd psi = psi0;
  const double e0 = energy(psi);
  out.times.push_back(0.0);
  out.states.push_back(psi);
  for (std::size_t s = 1; s <= n_steps; ++s) {
    const VectorXcd k1 = rhs(psi);
    const VectorXcd k2 = rhs(psi + 0.5 * dt * k1);
    const VectorXcd k3 = rhs(psi + 0.5 * dt * k2);
    const VectorXcd k4 = rhs(psi + dt * k3);
    psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.times.push_back(s * dt);
    out.states.push_back(psi);
    out.norm_drift = std::max(out.norm_drift, std::abs(psi.norm() - 1.0));
    out.energy_drift = std::max(out.energy_drift, std::abs(energy(psi) - e0));
    if (out.norm_drift > 1e-6)
      throw solver_error(
          "evolve_wfe: norm drift exceeded 1e-6; reduce the step size");
  }
  return out;
}

/// d/dt|_0 <psi|X|psi> by symmetric finite difference on the WFE flow,
/// against (i/hbar)<psi0|[H,X]|psi0> plus the nonlinear commutator term
/// (the latter vanishes when [A, X] = 0 or the state and operators are
/// real, which is when the velocity is w-independent).
struct VelocityReport {
  double numeric_derivative = 0.0;
  double commutator_derivative = 0.0;   // (i)<[H, X]>, the linear part
  double wfe_term_expectation = 0.0;    // i w N^2 <[A^2 - 2<A>A, X]>
  double discrepancy = 0.0;  // |numeric - (commutator + wfe term)|
};

inline VelocityReport initial_velocity_check(const ModeSystem& system,
                                             const WFEParams& params,
                                             const VectorXcd& psi0,
                                             double fd_dt = 1e-4) {
  system.validate();
  params.validate();
  if (std::abs(psi0.norm() - 1.0) > 1e-10)
    throw validation_error("initial_velocity_check: psi0 not normalized");

  auto x_after = [&](double dt) {
    const auto run = evolve_wfe(system, params, psi0, dt, 1);
    const VectorXcd& psi = run.states.back();
    return psi.dot(system.X * psi).real() / psi.squaredNorm();
  };
  VelocityReport rep;
  rep.numeric_derivative = (x_after(fd_dt) - x_after(-fd_dt)) / (2.0 * fd_dt);

  const std::complex<double> im(0.0, 1.0);
  const MatrixXcd commHX = system.H * system.X - system.X * system.H;
  rep.commutator_derivative = (im * psi0.dot(commHX * psi0)).real();

  const MatrixXcd& A = wfe_operator(system, params);
  const double a_mean = psi0.dot(A * psi0).real();
  const MatrixXcd nl = A * A - 2.0 * a_mean * A;
  const MatrixXcd commNX = nl * system.X - system.X * nl;
  rep.wfe_term_expectation = params.w * params.N * params.N *
                             (im * psi0.dot(commNX * psi0)).real();
  rep.discrepancy = std::abs(rep.numeric_derivative -
                             rep.commutator_derivative -
                             rep.wfe_term_expectation);
  return rep;
}

/// Exact Leibniz reduction of the momentum-form commutator: for any
/// matrices, [P^2 - 2<P>P, X] = P[P,X] + [P,X]P - 2<P>[P,X].  The continuum
/// step [P,X] = (hbar/i) M I has no finite-dimensional realization (the
/// commutator is traceless), so the canonical residual ||[P,X] + i hbar M I||
/// is reported rather than asserted.
struct CommutatorIdentityReport {
  double leibniz_residual = 0.0;
  double canonical_residual = 0.0;
};

inline CommutatorIdentityReport wfe_commutator_identity(
    const MatrixXcd& P, const MatrixXcd& X, const VectorXcd& psi, double M,
    double hbar = 1.0) {
  const double p_mean = psi.dot(P * psi).real() / psi.squaredNorm();
  const MatrixXcd K = P * X - X * P;
  const MatrixXcd lhs = (P * P - 2.0 * p_mean * P) * X -
                        X * (P * P - 2.0 * p_mean * P);
  const MatrixXcd rhs = P * K + K * P - 2.0 * p_mean * K;
  CommutatorIdentityReport rep;
  rep.leibniz_residual = (lhs - rhs).cwiseAbs().maxCoeff();
  const std::complex<double> c(0.0, -hbar * M);
  rep.canonical_residual =
      (K - c * MatrixXcd::Identity(K.rows(), K.cols())).cwiseAbs().maxCoeff();
  return rep;
}

/// Occupations of two mutually orthogonal domains; "cat-like" when both
/// exceed 1/4 while <X> sits between the domains' conditional positions.
struct CatReport {
  double p_first = 0.0;
  double p_second = 0.0;
  double x_mean = 0.0;
  bool cat_like = false;
};

inline CatReport cat_indicator(const VectorXcd& psi, const MatrixXcd& proj1,
                               const MatrixXcd& proj2, const MatrixXcd& X) {
  if ((proj1 * proj2).cwiseAbs().maxCoeff() > 1e-10)
    throw validation_error("cat_indicator: projectors not orthogonal");
  CatReport rep;
  rep.p_first = psi.dot(proj1 * psi).real();
  rep.p_second = psi.dot(proj2 * psi).real();
  rep.x_mean = psi.dot(X * psi).real();
  if (rep.p_first > 0.25 && rep.p_second > 0.25) {
    const double x1 =
        (proj1 * psi).dot(X * (proj1 * psi)).real() / rep.p_first;
    const double x2 =
        (proj2 * psi).dot(X * (proj2 * psi)).real() / rep.p_second;
    const double lo = std::min(x1, x2), hi = std::max(x1, x2);
    rep.cat_like = rep.x_mean > lo && rep.x_mean < hi;
  }
  return rep;
}

}  // namespace qplab
