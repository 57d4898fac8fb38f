#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qplab/ensembles.hpp"
#include "qplab/errors.hpp"
#include "qplab/signals.hpp"
#include "qplab/spectra.hpp"

namespace qplab {

/// B_{j,k} = (zeta_j - zeta_k) g_{j,k}: the gap-weighted position matrix.
inline Eigen::MatrixXd build_B_matrix(const Eigen::MatrixXd& g,
                                      const SpectrumModel& spectrum) {
  spectrum.validate();
  const Eigen::Index n = g.rows();
  if (g.cols() != n ||
      static_cast<std::size_t>(n) != spectrum.eigenvalues.size())
    throw structural_error("build_B_matrix: dimension mismatch");
  Eigen::MatrixXd B(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k)
      B(j, k) = (spectrum.eigenvalues[j] - spectrum.eigenvalues[k]) * g(j, k);
  return B;
}

/// Equivalent assembly from derivative overlaps d_{j,k} = <psi_j | psi_k'>:
/// the commutator [H, X] = -(hbar^2/M) d/dX gives
///   B_{j,k} = -(hbar^2/M) d_{j,k} = (hbar^2/2M)(d_{k,j} - d_{j,k}),
/// using the antisymmetry of d under Dirichlet conditions.
inline Eigen::MatrixXd build_B_from_overlaps(const Eigen::MatrixXd& d,
                                             double M, double hbar = 1.0) {
  if (d.rows() != d.cols())
    throw structural_error("build_B_from_overlaps: matrix not square");
  if (!(M > 0) || !(hbar > 0))
    throw validation_error("build_B_from_overlaps: M, hbar must be positive");
  return (hbar * hbar / (2.0 * M)) * (d.transpose() - d);
}

/// Derivative overlaps for the centered box modes on [-A, A], by composite
/// Simpson quadrature (oracle-grade; the analytic value is -2jk/(A(j^2-k^2))
/// ... times parity, but this routine deliberately avoids that shortcut).
inline Eigen::MatrixXd box_derivative_overlaps(std::size_t n_modes, double A,
                                               std::size_t panels = 4096) {
  if (n_modes < 2 || !(A > 0))
    throw validation_error("box_derivative_overlaps: need n_modes >= 2, A > 0");
  if (panels % 2 == 1) ++panels;
  const double pi = std::numbers::pi;
  const double L = 2.0 * A, h = L / panels;
  auto mode = [&](std::size_t k, double x) {
    return std::sqrt(1.0 / A) * std::sin(k * pi * (x + A) / L);
  };
  auto dmode = [&](std::size_t k, double x) {
    return std::sqrt(1.0 / A) * (k * pi / L) * std::cos(k * pi * (x + A) / L);
  };
  Eigen::MatrixXd d(n_modes, n_modes);
  for (std::size_t j = 1; j <= n_modes; ++j)
    for (std::size_t k = 1; k <= n_modes; ++k) {
      KahanSum s;
      for (std::size_t i = 0; i <= panels; ++i) {
        const double x = -A + i * h;
        const double wgt = (i == 0 || i == panels) ? 1.0
                           : (i % 2 == 1)          ? 4.0
                                                   : 2.0;
        s.add(wgt * mode(j, x) * dmode(k, x));
      }
      d(j - 1, k - 1) = s.value() * h / 3.0;
    }
  return d;
}

/// Partial-sum tables for the two series criteria plus the uniform
/// entrywise bound on |B| among modes below the energy cap.
struct NBMLReport {
  std::vector<std::size_t> term_counts;
  std::vector<double> theorem_sums;    // sum_{j,k<=n} |B_{j,k}|^2/(zeta_j zeta_k)
  std::vector<double> corollary_sums;  // sum_{j<=n} 1/zeta_j
  bool theorem_stalled = false;
  bool corollary_stalled = false;
  double bound_constant = 0.0;  // hbar * sqrt(2 e_max / M)
  double max_abs_b_capped = 0.0;
  bool bound_holds = false;
  std::size_t budget = 0;
};

/// Evaluates both series criteria on the truncated mode set.  Verdicts use
/// the shared stall tolerance and are budget-tagged: a stalled tail at this
/// truncation is evidence, not proof, of convergence.  The callable form
/// lets large truncations run without materializing B (tables are recorded
/// at geometric checkpoints).
inline NBMLReport nbml_criteria(
    const std::function<double(std::size_t, std::size_t)>& b_entry,
    const SpectrumModel& spectrum, double e_max,
    std::size_t growth_window = 8) {
  spectrum.validate();
  const std::size_t n = spectrum.eigenvalues.size();
  if (!(e_max > 0)) throw validation_error("nbml_criteria: e_max > 0");
  if (growth_window < 2 || n < growth_window + 1)
    throw validation_error("nbml_criteria: need n > growth_window >= 2");

  NBMLReport rep;
  rep.budget = n;
  rep.bound_constant = std::sqrt(2.0 * e_max);  // hbar = M = 1 core units
  KahanSum theorem, corollary;
  // per-term growth over the trailing window, for the stall verdicts
  std::vector<double> th_tail(growth_window + 1, 0.0);
  std::vector<double> co_tail(growth_window + 1, 0.0);
  std::size_t next_cp = 1;
  for (std::size_t m = 1; m <= n; ++m) {
    const double zm = spectrum.eigenvalues[m - 1];
    corollary.add(1.0 / zm);
    // new border terms of the m x m block
    for (std::size_t j = 1; j <= m; ++j) {
      const double zj = spectrum.eigenvalues[j - 1];
      const double bjm = b_entry(j - 1, m - 1), bmj = b_entry(m - 1, j - 1);
      double add = (bjm * bjm + bmj * bmj) / (zj * zm);
      if (j == m) add = bjm * bjm / (zj * zm);
      theorem.add(add);
      if (zj <= e_max && zm <= e_max)
        rep.max_abs_b_capped = std::max(
            rep.max_abs_b_capped, std::max(std::abs(bjm), std::abs(bmj)));
    }
    th_tail[m % (growth_window + 1)] = theorem.value();
    co_tail[m % (growth_window + 1)] = corollary.value();
    if (m == next_cp || m == n) {
      rep.term_counts.push_back(m);
      rep.theorem_sums.push_back(theorem.value());
      rep.corollary_sums.push_back(corollary.value());
      next_cp += std::max<std::size_t>(1, next_cp / 2);
      if (next_cp > n) next_cp = n;
    }
  }
  auto stalled = [&](const std::vector<double>& ring, double last) {
    const double before = ring[(n + 1) % (growth_window + 1)];
    if (last <= 0.0) return true;
    return (last - before) / (last * growth_window) < kStallTol;
  };
  rep.theorem_stalled = stalled(th_tail, theorem.value());
  rep.corollary_stalled = stalled(co_tail, corollary.value());
  rep.bound_holds = rep.max_abs_b_capped <= rep.bound_constant * (1 + 1e-12);
  return rep;
}

inline NBMLReport nbml_criteria(const Eigen::MatrixXd& B,
                                const SpectrumModel& spectrum, double e_max,
                                std::size_t growth_window = 8) {
  if (static_cast<std::size_t>(B.rows()) != spectrum.eigenvalues.size() ||
      B.cols() != B.rows())
    throw structural_error("nbml_criteria: dimension mismatch");
  return nbml_criteria(
      [&B](std::size_t j, std::size_t k) { return B(j, k); }, spectrum, e_max,
      growth_window);
}

/// Groups the observable double sum by distinct frequency differences
/// nu = zeta_j - zeta_k, aggregating a(nu) = sum over pairs with that gap of
/// conj(c_j) c_k g_{j,k}; the diagonal becomes the constant offset.  Exact
/// round trip: evaluating the extracted signal reproduces <psi(t)|g|psi(t)>.
inline QuasiPeriodicSignal observable_series_extract(
    const Eigen::VectorXcd& c, const Eigen::MatrixXd& g,
    const SpectrumModel& spectrum) {
  spectrum.validate();
  const Eigen::Index n = g.rows();
  if (g.cols() != n || c.size() != n ||
      static_cast<std::size_t>(n) != spectrum.eigenvalues.size())
    throw structural_error("observable_series_extract: dimension mismatch");

  // only exact degeneracies merge; near-degeneracies stay distinct
  const double tol = 1e-10 * spectrum.eigenvalues.back();

  struct Bin {
    double nu;
    std::complex<double> a;
  };
  std::vector<Bin> bins;
  QuasiPeriodicSignal sig;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) {
      const std::complex<double> amp = std::conj(c[j]) * c[k] * g(j, k);
      if (j == k) {
        sig.offset += amp.real();
        continue;
      }
      const double nu = spectrum.eigenvalues[j] - spectrum.eigenvalues[k];
      bool merged = false;
      for (auto& b : bins)
        if (std::abs(b.nu - nu) <= tol) {
          b.a += amp;
          merged = true;
          break;
        }
      if (!merged) bins.push_back({nu, amp});
    }
  std::sort(bins.begin(), bins.end(),
            [](const Bin& a, const Bin& b) { return a.nu < b.nu; });
  for (const auto& b : bins) {
    sig.amplitudes.push_back(b.a);
    sig.frequencies.push_back(b.nu);
  }
  sig.validate();
  return sig;
}

/// One sample's check of the bound chain
///   sum |a_n||nu_n| <= e_max * sqrt( sum |B_{j,k}|^2 / (zeta_j zeta_k) ).
struct CauchySchwarzCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

inline CauchySchwarzCheck cauchy_schwarz_check(const Eigen::VectorXcd& c,
                                               const Eigen::MatrixXd& g,
                                               const SpectrumModel& spectrum,
                                               double e_max) {
  const QuasiPeriodicSignal sig = observable_series_extract(c, g, spectrum);
  CauchySchwarzCheck out;
  KahanSum lhs;
  for (std::size_t i = 0; i < sig.amplitudes.size(); ++i)
    lhs.add(std::abs(sig.amplitudes[i]) * std::abs(sig.frequencies[i]));
  out.lhs = lhs.value();

  const Eigen::MatrixXd B = build_B_matrix(g, spectrum);
  KahanSum quad;
  const Eigen::Index n = B.rows();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k)
      quad.add(B(j, k) * B(j, k) /
               (spectrum.eigenvalues[j] * spectrum.eigenvalues[k]));
  out.rhs = e_max * std::sqrt(quad.value());
  out.holds = out.lhs <= out.rhs * (1 + 1e-12);
  return out;
}

}  // namespace qplab
