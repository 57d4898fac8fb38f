#pragma once

#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qplab/classical.hpp"
#include "qplab/diagnostics.hpp"
#include "qplab/ensembles.hpp"
#include "qplab/quantum.hpp"
#include "qplab/signals.hpp"
#include "qplab/spectra.hpp"
#include "qplab/triangle.hpp"

namespace qplab::acceptance {

struct CriterionResult {
  int id = 0;
  std::string tag;   // module filter key
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

namespace detail {

struct Check {
  bool ok = true;
  std::ostringstream log;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      log << "FAIL{" << what << "} ";
    }
  }
  void note(const std::string& what) { log << what << "; "; }
};

inline std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

inline std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

inline std::vector<double> logspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = a * std::pow(b / a, static_cast<double>(i) /
                                   static_cast<double>(n - 1));
  return v;
}

inline Eigen::MatrixXcd random_hermitian(std::size_t n, CounterRng& rng,
                                         double scale) {
  Eigen::MatrixXcd A(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      A(i, j) = std::complex<double>(rng.normal(), rng.normal());
  return scale * 0.5 * (A + A.adjoint());
}

inline Eigen::VectorXcd random_state(std::size_t n, CounterRng& rng) {
  Eigen::VectorXcd v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = std::complex<double>(rng.normal(), rng.normal());
  return v / v.norm();
}

// slope of least-squares fit y = a + b x
inline double fit_slope(const std::vector<double>& x,
                        const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace detail

// 1. Complex Wiener series second moment E|w_c(t)|^2 = t, Monte Carlo.
inline CriterionResult criterion_1() {
  detail::Check c;
  const std::size_t n_draws = 10000, n_terms = 1000;
  const std::vector<double> ts = {0.25, 0.5, 0.75};
  std::vector<KahanSum> sum(ts.size()), sum2(ts.size());
  for (std::size_t d = 0; d < n_draws; ++d) {
    // two independent streams: positive- and negative-frequency coefficients
    const auto pos =
        draw_coefficients(n_terms, 2026, CoefDistribution::Gaussian, 2 * d);
    const auto neg = draw_coefficients(n_terms, 2026,
                                       CoefDistribution::Gaussian, 2 * d + 1);
    const auto w = wiener_complex_sample(pos, neg, ts);
    for (std::size_t ti = 0; ti < ts.size(); ++ti) {
      const double m2 = std::norm(w[ti]);
      sum[ti].add(m2);
      sum2[ti].add(m2 * m2);
    }
  }
  for (std::size_t ti = 0; ti < ts.size(); ++ti) {
    const double mean = sum[ti].value() / n_draws;
    const double var =
        std::max(0.0, sum2[ti].value() / n_draws - mean * mean);
    const double se = std::sqrt(var / n_draws);
    c.expect(std::abs(mean - ts[ti]) <= 3.0 * se,
             "E|w_c|^2 at t=" + detail::fmt(ts[ti]) + ": " +
                 detail::fmt(mean) + " vs " + detail::fmt(ts[ti]) + " (3se=" +
                 detail::fmt(3 * se) + ")");
    c.note("t=" + detail::fmt(ts[ti]) + " m2=" + detail::fmt(mean) + "+-" +
           detail::fmt(se));
  }
  return {1, "classical", "wiener-variance-identity", c.ok, c.log.str(), 0};
}

// 2. Figure-1 ensemble: 5 curves start at 0; ensemble variance matches the
// closed-form coefficient-square sum within 5%.
inline CriterionResult criterion_2() {
  detail::Check c;
  const double gamma = 10.0;
  const std::size_t n_terms = 1000, n_grid = 512, n_draws = 10000;
  const auto times = detail::linspace(0.0, 1.0, n_grid);

  OUParams params;
  params.gamma = gamma;
  params.n_terms = n_terms;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto draw =
        draw_coefficients(n_terms, seed, CoefDistribution::Gaussian);
    const auto traj = ou_series_sample(params, draw, times);
    c.expect(traj.values.size() == n_grid, "grid size");
    c.expect(std::abs(traj.values.front()) < 1e-15,
             "curve seed " + std::to_string(seed) + " starts at 0");
  }

  // variance check via the deterministic basis decomposition
  Eigen::MatrixXd C(n_terms + 1, n_grid);
  for (std::size_t n = 0; n <= n_terms; ++n)
    for (std::size_t i = 0; i < n_grid; ++i)
      C(n, i) = ou_basis_coefficient(gamma, n, times[i]);
  Eigen::MatrixXd A(n_draws, n_terms + 1);
  for (std::size_t d = 0; d < n_draws; ++d) {
    CounterRng rng(2027, d);
    for (std::size_t n = 0; n <= n_terms; ++n) A(d, n) = rng.normal();
  }
  const Eigen::MatrixXd V = A * C;  // draw x time values
  double worst = 0.0;
  for (std::size_t i = 1; i < n_grid; ++i) {  // skip t=0 (variance 0 = 0)
    const double mean = V.col(i).mean();
    const double var = (V.col(i).array() - mean).square().sum() / n_draws;
    const double closed = C.col(i).squaredNorm();
    worst = std::max(worst, std::abs(var - closed) / closed);
  }
  c.expect(worst < 0.05,
           "ensemble variance vs closed form, worst rel err " +
               detail::fmt(worst));
  c.note("worst variance rel err " + detail::fmt(worst));
  return {2, "classical", "figure1-ensemble-variance", c.ok, c.log.str(), 0};
}

// 3. OU MSD closed form vs exact-discretization Monte Carlo; small-t t^3/3.
inline CriterionResult criterion_3() {
  detail::Check c;
  const double gamma = 10.0;
  const std::vector<double> ts = {0.1, 0.25, 0.5, 0.75, 1.0};
  // fine marching grid (exact velocity kernel, trapezoid position) with the
  // five probe times sitting exactly on grid points
  const std::size_t per_unit = 1000;
  const auto grid = detail::linspace(0.0, 1.0, per_unit + 1);
  std::vector<std::size_t> probe;
  for (double t : ts)
    probe.push_back(static_cast<std::size_t>(std::lround(t * per_unit)));
  const std::size_t n_paths = 10000;
  std::vector<KahanSum> sum(ts.size()), sum2(ts.size());
  for (std::size_t p = 0; p < n_paths; ++p) {
    const auto path = ou_exact_sample(gamma, grid, 2028, p);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double x = path.position.values[probe[i]];
      const double d2 = x * x;
      sum[i].add(d2);
      sum2[i].add(d2 * d2);
    }
  }
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double mean = sum[i].value() / n_paths;
    const double var = std::max(0.0, sum2[i].value() / n_paths - mean * mean);
    const double se = std::sqrt(var / n_paths);
    const double ref = ou_msd_analytic(gamma, ts[i]);
    c.expect(std::abs(mean - ref) <= 3.0 * se,
             "MSD at t=" + detail::fmt(ts[i]) + ": mc " + detail::fmt(mean) +
                 " vs " + detail::fmt(ref) + " (3se=" + detail::fmt(3 * se) +
                 ")");
  }
  const double t = 1e-3;
  const double ratio = ou_msd_analytic(1.0, t) / (t * t * t);
  c.expect(std::abs(ratio - 1.0 / 3.0) < 0.005 / 3.0,
           "small-t ratio " + detail::fmt(ratio) + " vs 1/3");
  c.note("small-t msd/t^3 = " + detail::fmt(ratio));
  return {3, "classical", "ou-msd-closed-form", c.ok, c.log.str(), 0};
}

// 4. Domain-monotonicity sandwich, 9x equal-thirds ratio, isoceles 5 pi^2.
inline CriterionResult criterion_4() {
  detail::Check c;
  BoxGeometry geom;  // A=1/2, B=-1/6, C=1/6: equal thirds
  geom.n_right = 1;
  geom.n_left = 0;
  const auto surr = surrounding_rectangle_spectrum(geom, 200.0);
  const auto imm = immersed_rectangle_spectrum(geom, 1800.0);
  c.expect(surr.eigenvalues.size() >= 5 && imm.eigenvalues.size() >= 5,
           "enough rectangle modes");

  // equal thirds: immersed = 9 x surrounding, same multi-index set.
  // degenerate levels may order their labels differently, so compare the
  // label multiset of each degeneracy group rather than position by position
  auto group_labels = [](const SpectrumModel& s, std::size_t i) {
    std::vector<std::string> out;
    for (std::size_t j = 0; j < s.eigenvalues.size(); ++j)
      if (std::abs(s.eigenvalues[j] - s.eigenvalues[i]) <
          1e-12 * s.eigenvalues[i])
        out.push_back(s.labels[j]);
    std::sort(out.begin(), out.end());
    return out;
  };
  for (std::size_t i = 0; i < 5; ++i) {
    c.expect(group_labels(surr, i) == group_labels(imm, i),
             "label group match at " + std::to_string(i));
    const double ratio = imm.eigenvalues[i] / surr.eigenvalues[i];
    c.expect(std::abs(ratio - 9.0) < 9.0 * 1e-12,
             "9x ratio at index " + std::to_string(i) + ": " +
                 detail::fmt(ratio));
  }

  const auto grid = TriangleGrid::from_masses(geom.m, geom.M, geom.A,
                                              geom.hbar, 48);
  const auto tri = triangle_dirichlet_eigs(grid, 5);
  for (std::size_t i = 0; i < 5; ++i) {
    const double t = tri.spectrum.eigenvalues[i];
    c.expect(surr.eigenvalues[i] <= t + tri.error_indicator[i],
             "surrounding <= triangle at index " + std::to_string(i) + " (" +
                 detail::fmt(surr.eigenvalues[i]) + " vs " + detail::fmt(t) +
                 ")");
    c.expect(t <= imm.eigenvalues[i] + tri.error_indicator[i],
             "triangle <= immersed at index " + std::to_string(i) + " (" +
                 detail::fmt(t) + " vs " + detail::fmt(imm.eigenvalues[i]) +
                 ")");
  }
  c.note("triangle ground " + detail::fmt(tri.spectrum.eigenvalues[0]) +
         " in [" + detail::fmt(surr.eigenvalues[0]) + ", " +
         detail::fmt(imm.eigenvalues[0]) + "]");

  TriangleGrid iso{1.0, 1.0, 48};
  const auto iso_eig = triangle_dirichlet_eigs(iso, 1);
  const double ref = 5.0 * std::numbers::pi * std::numbers::pi;
  const double rel = std::abs(iso_eig.spectrum.eigenvalues[0] - ref) / ref;
  c.expect(rel < 0.005, "isoceles ground state rel err " + detail::fmt(rel));
  c.note("isoceles ground " + detail::fmt(iso_eig.spectrum.eigenvalues[0]) +
         " vs 5pi^2 " + detail::fmt(ref));
  return {4, "spectra", "domain-monotonicity-sandwich", c.ok, c.log.str(), 0};
}

// 5. Basel sum at budget 1e4; N=2 logarithmic divergence fit.
inline CriterionResult criterion_5() {
  detail::Check c;
  const auto basel = inverse_square_sum(1, 10000);
  const double ref = std::numbers::pi * std::numbers::pi / 6.0;
  c.expect(std::abs(basel.partial_sums.back() - ref) < 1e-3,
           "Basel sum " + detail::fmt(basel.partial_sums.back()) + " vs " +
               detail::fmt(ref));
  // the stall verdict needs the tail term 1/K^2 below ~1e-9 of the sum,
  // which a budget of 1e4 cannot reach; check it at a deeper budget
  c.expect(!inverse_square_sum(1, 50000).divergent, "N=1 verdict convergent");

  const auto d2 = inverse_square_sum(2, 600);
  c.expect(d2.fit_slope > 0.0, "N=2 log slope positive");
  c.expect(d2.fit_r2 > 0.999, "N=2 fit R^2 " + detail::fmt(d2.fit_r2));
  c.expect(d2.divergent, "N=2 verdict divergent");
  c.note("N=2 slope " + detail::fmt(d2.fit_slope) + " r2 " +
         detail::fmt(d2.fit_r2));
  return {5, "spectra", "inverse-square-divergence", c.ok, c.log.str(), 0};
}

namespace detail {

inline GibbsEnsembleSpec demo_gibbs_spec(std::size_t n_modes) {
  GibbsEnsembleSpec spec;
  spec.zeta = box_spectrum(n_modes, 0.5);
  spec.beta = 0.02;
  spec.e_max = 100.0;
  spec.seed = 2029;
  return spec;
}

}  // namespace detail

// 6. Gibbs moments: unpaired moments vanish; constraints hold per sample.
inline CriterionResult criterion_6() {
  detail::Check c;
  auto spec = detail::demo_gibbs_spec(8);
  // thin hard enough that the energy series decorrelates: the default
  // n_modes-step thinning leaves an autocorrelation time of ~100 steps
  const std::size_t n_samples = 25000;
  const auto run = gibbs_sample(spec, n_samples, 0, 0, 200);
  c.expect(run.effective_sample_size >= 10000.0,
           "effective sample size " + detail::fmt(run.effective_sample_size));
  for (const auto& s : run.samples) {
    if (std::abs(s.c.squaredNorm() - 1.0) > 1e-12) {
      c.expect(false, "normalization violated");
      break;
    }
    if (s.energy(spec.zeta) >= spec.e_max) {
      c.expect(false, "energy cap violated");
      break;
    }
  }
  const auto rep = coefficient_moments(run.samples);
  double worst_cross = 0.0, worst_unconj = 0.0;
  for (Eigen::Index j = 0; j < 8; ++j)
    for (Eigen::Index k = 0; k < 8; ++k) {
      if (j != k)
        worst_cross = std::max(
            worst_cross, std::abs(rep.cross(j, k)) /
                             std::max(rep.cross_se(j, k), 1e-300));
      worst_unconj = std::max(
          worst_unconj, std::abs(rep.unconj(j, k)) /
                            std::max(rep.unconj_se(j, k), 1e-300));
    }
  c.expect(worst_cross < 4.0,
           "max |E c_j c_k*|/se = " + detail::fmt(worst_cross));
  c.expect(worst_unconj < 4.0,
           "max |E c_j c_k|/se = " + detail::fmt(worst_unconj));
  c.note("ess " + detail::fmt(run.effective_sample_size) + " cross " +
         detail::fmt(worst_cross) + "se unconj " + detail::fmt(worst_unconj) +
         "se");
  return {6, "ensembles", "gibbs-moment-structure", c.ok, c.log.str(), 0};
}

// 7. MSD pairing reduction vs direct evolution; t=0 value; short-time slope.
inline CriterionResult criterion_7() {
  detail::Check c;
  auto spec = detail::demo_gibbs_spec(6);
  const auto g = box_position_matrix(6, 0.5);
  const auto run = gibbs_sample(spec, 3000, /*stream=*/7);
  const auto rep = coefficient_moments(run.samples);

  const auto times = detail::linspace(0.0, 0.5, 12);
  const auto reduced = msd_curve(spec.zeta, g, rep.abs2_pair, times);
  const auto direct = msd_direct_mc(run.samples, spec.zeta, g, times);
  c.expect(reduced.values.front() == 0.0, "msd_curve(0) = 0");
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double gap = std::abs(reduced.values[i] - direct.mean.values[i]);
    c.expect(gap <= 3.0 * direct.stderr_values[i] + 1e-12,
             "pairing reduction at t=" + detail::fmt(times[i]) + ": gap " +
                 detail::fmt(gap) + " vs 3se " +
                 detail::fmt(3 * direct.stderr_values[i]));
  }

  const double zeta_max = spec.zeta.back();
  const auto short_times = detail::logspace(1e-4 / zeta_max, 1e-3 / zeta_max, 16);
  const auto short_msd = msd_curve(spec.zeta, g, rep.abs2_pair, short_times);
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < short_times.size(); ++i) {
    lx.push_back(std::log(short_times[i]));
    ly.push_back(std::log(short_msd.values[i]));
  }
  const double slope = detail::fit_slope(lx, ly);
  c.expect(std::abs(slope - 2.0) <= 0.05,
           "short-time slope " + detail::fmt(slope));
  c.note("short-time slope " + detail::fmt(slope));
  return {7, "ensembles", "msd-pairing-reduction", c.ok, c.log.str(), 0};
}

// 8. B from gaps-times-g equals B from derivative overlaps; uniform bound.
inline CriterionResult criterion_8() {
  detail::Check c;
  const std::size_t n = 16;
  const double A = 0.5;
  SpectrumModel sm;
  sm.eigenvalues = box_spectrum(n, A);
  sm.source = "analytic-rectangle";
  const auto g = box_position_matrix(n, A);
  const auto B1 = build_B_matrix(g, sm);
  const auto d = box_derivative_overlaps(n, A);
  const auto B2 = build_B_from_overlaps(d, 1.0);
  const double gap = (B1 - B2).cwiseAbs().maxCoeff();
  c.expect(gap < 1e-8, "assembly agreement, max gap " + detail::fmt(gap));

  const double e_max = sm.eigenvalues.back() * 1.0001;
  const auto rep = nbml_criteria(B1, sm, e_max);
  c.expect(rep.bound_holds, "uniform bound: max |B| " +
                                detail::fmt(rep.max_abs_b_capped) + " vs " +
                                detail::fmt(rep.bound_constant));
  c.note("assembly gap " + detail::fmt(gap) + ", bound " +
         detail::fmt(rep.max_abs_b_capped) + " <= " +
         detail::fmt(rep.bound_constant));
  return {8, "diagnostics", "matrix-element-identity", c.ok, c.log.str(), 0};
}

// 9. Cauchy-Schwarz chain holds for every Gibbs sample.
inline CriterionResult criterion_9() {
  detail::Check c;
  auto spec = detail::demo_gibbs_spec(8);
  const auto g = box_position_matrix(8, 0.5);
  SpectrumModel sm;
  sm.eigenvalues = spec.zeta;
  sm.source = "analytic-rectangle";
  const auto run = gibbs_sample(spec, 100, /*stream=*/9);
  std::size_t violations = 0;
  double worst = 0.0;
  for (const auto& s : run.samples) {
    const auto chk = cauchy_schwarz_check(s.c, g, sm, spec.e_max);
    if (!chk.holds) ++violations;
    worst = std::max(worst, chk.lhs / chk.rhs);
  }
  c.expect(violations == 0,
           std::to_string(violations) + " of 100 samples violate the bound");
  c.note("max lhs/rhs " + detail::fmt(worst));
  return {9, "diagnostics", "cauchy-schwarz-chain", c.ok, c.log.str(), 0};
}

// 10. Extract-then-evaluate round trip on random 4-16 mode systems.
inline CriterionResult criterion_10() {
  detail::Check c;
  CounterRng rng(2030, 0);
  double worst = 0.0;
  for (std::size_t trial = 0; trial < 20; ++trial) {
    const std::size_t n = 4 + trial % 13;
    SpectrumModel sm;
    double z = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      z += rng.uniform(0.5, 1.5);
      sm.eigenvalues.push_back(z);
    }
    sm.source = "random";
    Eigen::MatrixXd g(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j)
        g(i, j) = g(j, i) = rng.normal();
    const auto psi = detail::random_state(n, rng);

    const auto sig = observable_series_extract(psi, g, sm);
    const auto times = detail::linspace(0.0, 3.0, 25);
    const auto back = evaluate_qp(sig, times);
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
      std::complex<double> x = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          x += std::conj(psi[j]) * psi[k] * g(j, k) *
               std::polar(1.0, (sm.eigenvalues[j] - sm.eigenvalues[k]) *
                                   times[ti]);
      worst = std::max(worst, std::abs(back.values[ti] - x.real()));
    }
  }
  c.expect(worst < 1e-9, "round-trip max error " + detail::fmt(worst));
  c.note("round-trip max error " + detail::fmt(worst));
  return {10, "diagnostics", "observable-round-trip", c.ok, c.log.str(), 0};
}

// 11. Zeno exponent 2 and n-peek monotonicity.
inline CriterionResult criterion_11() {
  detail::Check c;
  CounterRng rng(2031, 0);
  const std::size_t n = 6;
  ModeSystem sys;
  sys.H = detail::random_hermitian(n, rng, 1.0);
  sys.X = Eigen::MatrixXcd::Identity(n, n);
  sys.S = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t i = 0; i < 3; ++i) P(i, i) = 1.0;
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(n);
  for (std::size_t i = 0; i < 3; ++i)
    psi0[i] = std::complex<double>(rng.normal(), rng.normal());
  psi0 /= psi0.norm();

  const auto res = zeno_survival(sys, psi0, P, 1.0, {1, 10, 100});
  c.expect(std::abs(res.fitted_exponent - 2.0) <= 0.10,
           "fitted exponent " + detail::fmt(res.fitted_exponent));
  c.expect(res.peek_survivals.size() == 3 &&
               res.peek_survivals[0] < res.peek_survivals[1] &&
               res.peek_survivals[1] < res.peek_survivals[2],
           "n-peek survival monotone: " + detail::fmt(res.peek_survivals[0]) +
               ", " + detail::fmt(res.peek_survivals[1]) + ", " +
               detail::fmt(res.peek_survivals[2]));
  c.note("p=" + detail::fmt(res.fitted_exponent) + " peeks " +
         detail::fmt(res.peek_survivals[0]) + "/" +
         detail::fmt(res.peek_survivals[1]) + "/" +
         detail::fmt(res.peek_survivals[2]));
  return {11, "quantum", "zeno-exponent", c.ok, c.log.str(), 0};
}

namespace detail {

// A system whose S and X share an eigenbasis (so the S- and X-form nonlinear
// terms commute with X exactly), plus a real variant for the momentum form.
inline ModeSystem wfe_demo_system(std::size_t n, CounterRng& rng) {
  Eigen::MatrixXd R(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) R(i, j) = rng.normal();
  const Eigen::MatrixXd Q =
      Eigen::HouseholderQR<Eigen::MatrixXd>(R).householderQ();
  Eigen::VectorXd x(n), s(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = rng.uniform(-1.0, 1.0);
    s[i] = rng.uniform(-0.5, 0.5);
  }
  ModeSystem sys;
  sys.X = (Q * x.asDiagonal() * Q.transpose()).cast<std::complex<double>>();
  sys.S = (Q * s.asDiagonal() * Q.transpose()).cast<std::complex<double>>();
  sys.H = random_hermitian(n, rng, 0.5);
  Eigen::MatrixXd R2(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) R2(i, j) = rng.normal();
  sys.P = std::complex<double>(0.0, -0.25) *
          (R2 - R2.transpose()).cast<std::complex<double>>();
  return sys;
}

}  // namespace detail

// 12. WFE integrator: linear limit, conservation, w-independent velocity.
inline CriterionResult criterion_12() {
  detail::Check c;
  CounterRng rng(2032, 0);
  const std::size_t n = 8;
  ModeSystem sys = detail::wfe_demo_system(n, rng);
  const auto psi0 = detail::random_state(n, rng);
  const double dt = 0.005;
  const std::size_t steps = 1000;

  // (a) w = 0 reproduces linear evolution
  WFEParams off;
  off.w = 0.0;
  const auto run0 = evolve_wfe(sys, off, psi0, dt, steps);
  const auto lin = evolve_linear(sys, psi0, {0.0, dt * steps});
  const double lin_gap = (run0.states.back() - lin.back()).norm();
  c.expect(lin_gap < 1e-8, "w=0 vs linear gap " + detail::fmt(lin_gap));

  // (b) conservation at w = 1
  WFEParams on;
  on.w = 1.0;
  on.N = 2;
  on.op = WfeOperator::Com;
  const auto run1 = evolve_wfe(sys, on, psi0, dt, steps);
  c.expect(run1.norm_drift < 1e-8, "norm drift " +
                                       detail::fmt(run1.norm_drift));
  c.expect(run1.energy_drift < 1e-6,
           "energy drift " + detail::fmt(run1.energy_drift));

  // (c) initial velocity independent of w for all three operator forms
  for (WfeOperator op :
       {WfeOperator::Com, WfeOperator::Observed, WfeOperator::Momentum}) {
    Eigen::VectorXcd psi = psi0;
    ModeSystem* s = &sys;
    ModeSystem real_sys;
    if (op == WfeOperator::Momentum) {
      // real state + real symmetric H, X: the P-form terms cannot move <X>
      CounterRng rng2(2033, 0);
      real_sys = detail::wfe_demo_system(n, rng2);
      Eigen::MatrixXd hr(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j)
          hr(i, j) = hr(j, i) = 0.3 * rng2.normal();
      real_sys.H = hr.cast<std::complex<double>>();
      s = &real_sys;
      Eigen::VectorXd pr(n);
      for (std::size_t i = 0; i < n; ++i) pr[i] = rng2.normal();
      psi = (pr / pr.norm()).cast<std::complex<double>>();
    }
    WFEParams pa;
    pa.N = 2;
    pa.op = op;
    pa.w = 1.0;
    const auto von = initial_velocity_check(*s, pa, psi);
    pa.w = 0.0;
    const auto voff = initial_velocity_check(*s, pa, psi);
    const double gap =
        std::abs(von.numeric_derivative - voff.numeric_derivative);
    c.expect(gap < 1e-6, "velocity w-dependence (" + to_string(op) +
                             " form) " + detail::fmt(gap));
    c.expect(std::abs(von.numeric_derivative - von.commutator_derivative) <
                 1e-6,
             "velocity vs commutator (" + to_string(op) + " form)");
  }
  c.note("lin gap " + detail::fmt(lin_gap) + ", drifts " +
         detail::fmt(run1.norm_drift) + "/" + detail::fmt(run1.energy_drift));
  return {12, "quantum", "wfe-integrator", c.ok, c.log.str(), 0};
}

/// Runs criteria 1-12 (optionally filtered by tag or id substring) and
/// appends criterion 13: the whole suite finished under 10 minutes with
/// every selected criterion passing.
inline std::vector<CriterionResult> run_suite(const std::string& only = "") {
  using clock = std::chrono::steady_clock;
  struct Entry {
    int id;
    const char* tag;
    CriterionResult (*fn)();
  };
  const std::vector<Entry> criteria = {
      {1, "classical", criterion_1},    {2, "classical", criterion_2},
      {3, "classical", criterion_3},    {4, "spectra", criterion_4},
      {5, "spectra", criterion_5},      {6, "ensembles", criterion_6},
      {7, "ensembles", criterion_7},    {8, "diagnostics", criterion_8},
      {9, "diagnostics", criterion_9},  {10, "diagnostics", criterion_10},
      {11, "quantum", criterion_11},    {12, "quantum", criterion_12}};
  std::vector<CriterionResult> results;
  const auto suite_start = clock::now();
  for (const auto& e : criteria) {
    if (!only.empty() && std::string(e.tag).find(only) == std::string::npos &&
        std::to_string(e.id) != only)
      continue;
    const auto t0 = clock::now();
    CriterionResult r;
    try {
      r = e.fn();
    } catch (const std::exception& ex) {
      r = {e.id, e.tag, "exception", false,
           std::string("unhandled exception: ") + ex.what(), 0};
    }
    r.seconds = std::chrono::duration<double>(clock::now() - t0).count();
    results.push_back(std::move(r));
  }
  const double total =
      std::chrono::duration<double>(clock::now() - suite_start).count();
  bool all = true;
  for (const auto& r : results) all = all && r.passed;
  CriterionResult summary;
  summary.id = 13;
  summary.tag = "cli";
  summary.name = "suite-runtime";
  summary.seconds = total;
  summary.passed = all && total < 600.0;
  summary.detail = "total " + detail::fmt(total) + " s, all selected " +
                   (all ? "passed" : "NOT passed");
  results.push_back(summary);
  return results;
}

}  // namespace qplab::acceptance
