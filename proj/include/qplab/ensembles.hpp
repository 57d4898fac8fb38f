#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qplab/errors.hpp"
#include "qplab/rng.hpp"
#include "qplab/spectra.hpp"
#include "qplab/trajectory.hpp"

namespace qplab {

/// Gibbs ensemble of wavefunction coefficients on the unit sphere with
/// density exp(-beta sum |c_k|^2 zeta_k), restricted to
/// sum |c_k|^2 zeta_k < e_max.  hbar = 1 internally, so omega == zeta.
struct GibbsEnsembleSpec {
  std::vector<double> zeta;  // ascending positive eigenvalues, one per mode
  double beta = 1.0;
  double e_max = 0.0;        // energy cap
  std::uint64_t seed = 0;

  std::size_t n_modes() const { return zeta.size(); }

  void validate() const {
    if (zeta.size() < 2) throw validation_error("gibbs: need >= 2 modes");
    if (!(beta >= 0.0)) throw validation_error("gibbs: beta >= 0");
    for (std::size_t i = 0; i < zeta.size(); ++i) {
      if (!(zeta[i] > 0.0)) throw validation_error("gibbs: zeta > 0");
      if (i > 0 && zeta[i] < zeta[i - 1])
        throw validation_error("gibbs: zeta must ascend");
    }
    if (!(e_max > zeta.front()))
      throw validation_error("gibbs: infeasible cap, need e_max > zeta_1");
  }
};

struct CoefficientSample {
  Eigen::VectorXcd c;

  double energy(const std::vector<double>& zeta) const {
    double e = 0.0;
    for (Eigen::Index k = 0; k < c.size(); ++k)
      e += std::norm(c[k]) * zeta[static_cast<std::size_t>(k)];
    return e;
  }
};

struct GibbsRun {
  std::vector<CoefficientSample> samples;
  double acceptance_rate = 0.0;
  double effective_sample_size = 0.0;  // of the energy series
  std::string quality_warning;         // empty when ESS is adequate
};

namespace detail {

inline double ess_from_series(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 8) return static_cast<double>(n);
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= n;
  if (var <= 0.0) return static_cast<double>(n);
  double tau = 1.0;
  for (std::size_t lag = 1; lag < n / 2; ++lag) {
    double c = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i)
      c += (x[i] - mean) * (x[i + lag] - mean);
    c /= (n - lag) * var;
    if (c < 0.05) break;
    tau += 2.0 * c;
  }
  return n / tau;
}

}  // namespace detail

/// Metropolis chain on the unit sphere: two-mode Givens rotations (angle
/// uniform on [-0.3, 0.3] rad) plus per-mode phase kicks; the energy cap is
/// enforced by rejection.  Burn-in 1000*n_modes steps, thinning n_modes
/// steps unless overridden.  Deterministic given (spec.seed, stream).
inline GibbsRun gibbs_sample(const GibbsEnsembleSpec& spec,
                             std::size_t n_samples, std::uint64_t stream = 0,
                             std::size_t burn_in_override = 0,
                             std::size_t thin_override = 0) {
  spec.validate();
  const std::size_t n = spec.n_modes();
  const std::size_t burn_in = burn_in_override ? burn_in_override : 1000 * n;
  const std::size_t thin = thin_override ? thin_override : n;

  CounterRng rng(spec.seed, stream);
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n);
  c[0] = 1.0;  // feasible: zeta_1 < e_max
  double energy = spec.zeta[0];

  std::size_t accepted = 0, proposed = 0;
  std::vector<double> energy_series;
  energy_series.reserve(n_samples);

  auto step = [&] {
    ++proposed;
    std::size_t j = static_cast<std::size_t>(rng.uniform01() * n) % n;
    std::size_t k = static_cast<std::size_t>(rng.uniform01() * (n - 1)) % (n - 1);
    if (k >= j) ++k;
    const double theta = rng.uniform(-0.3, 0.3);
    const double ct = std::cos(theta), st = std::sin(theta);
    const std::complex<double> cj = ct * c[j] - st * c[k];
    const std::complex<double> ck = st * c[j] + ct * c[k];
    const std::size_t p = static_cast<std::size_t>(rng.uniform01() * n) % n;
    const double alpha = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const std::complex<double> phase(std::cos(alpha), std::sin(alpha));
    const std::complex<double> cp_old = (p == j) ? cj : (p == k) ? ck : c[p];
    const std::complex<double> cp_new = cp_old * phase;

    double new_energy = energy;
    new_energy += (std::norm(cj) - std::norm(c[j])) * spec.zeta[j];
    new_energy += (std::norm(ck) - std::norm(c[k])) * spec.zeta[k];
    // the phase kick leaves all |c|^2 unchanged
    if (new_energy >= spec.e_max) return;
    if (spec.beta > 0.0 && new_energy > energy &&
        rng.uniform01() >= std::exp(-spec.beta * (new_energy - energy)))
      return;
    c[j] = cj;
    c[k] = ck;
    c[p] = cp_new;
    energy = new_energy;
    ++accepted;
  };

  for (std::size_t i = 0; i < burn_in; ++i) step();

  GibbsRun out;
  out.samples.reserve(n_samples);
  for (std::size_t s = 0; s < n_samples; ++s) {
    for (std::size_t i = 0; i < thin; ++i) step();
    CoefficientSample cs;
    cs.c = c / c.norm();  // scrub accumulated rounding, normalization exact
    out.samples.push_back(std::move(cs));
    energy_series.push_back(energy);
  }
  out.acceptance_rate = proposed ? static_cast<double>(accepted) / proposed : 0;
  out.effective_sample_size = detail::ess_from_series(energy_series);
  if (out.effective_sample_size < 0.05 * static_cast<double>(n_samples))
    out.quality_warning =
        "effective sample size " + std::to_string(out.effective_sample_size) +
        " below 5% of " + std::to_string(n_samples) + " samples";
  return out;
}

/// Moment estimates with batch-means standard errors (robust to chain
/// autocorrelation).
struct MomentReport {
  Eigen::MatrixXcd cross;       // E c_j c_k^*
  Eigen::MatrixXcd unconj;      // E c_j c_k
  Eigen::MatrixXd abs2_pair;    // E |c_j|^2 |c_k|^2
  Eigen::MatrixXd cross_se;     // per-entry standard error (complex modulus)
  Eigen::MatrixXd unconj_se;
  Eigen::MatrixXd abs2_pair_se;
  std::size_t n_samples = 0;
};

inline MomentReport coefficient_moments(
    const std::vector<CoefficientSample>& samples) {
  if (samples.size() < 100)
    throw validation_error("coefficient_moments: need >= 100 samples");
  const std::size_t n = static_cast<std::size_t>(samples[0].c.size());
  const std::size_t ns = samples.size();
  const std::size_t n_batches = std::min<std::size_t>(50, ns / 2);
  const std::size_t batch_len = ns / n_batches;

  MomentReport rep;
  rep.n_samples = ns;
  rep.cross = Eigen::MatrixXcd::Zero(n, n);
  rep.unconj = Eigen::MatrixXcd::Zero(n, n);
  rep.abs2_pair = Eigen::MatrixXd::Zero(n, n);
  rep.cross_se = Eigen::MatrixXd::Zero(n, n);
  rep.unconj_se = Eigen::MatrixXd::Zero(n, n);
  rep.abs2_pair_se = Eigen::MatrixXd::Zero(n, n);

  std::vector<Eigen::MatrixXcd> bc(n_batches, Eigen::MatrixXcd::Zero(n, n));
  std::vector<Eigen::MatrixXcd> bu(n_batches, Eigen::MatrixXcd::Zero(n, n));
  std::vector<Eigen::MatrixXd> bp(n_batches, Eigen::MatrixXd::Zero(n, n));
  for (std::size_t b = 0; b < n_batches; ++b) {
    const std::size_t lo = b * batch_len;
    const std::size_t hi = (b + 1 == n_batches) ? ns : lo + batch_len;
    for (std::size_t s = lo; s < hi; ++s) {
      const auto& c = samples[s].c;
      bc[b] += c * c.adjoint();                        // (j,k): c_j c_k^*
      bu[b] += c * c.transpose();                      // (j,k): c_j c_k
      const Eigen::VectorXd p = c.cwiseAbs2();
      bp[b] += p * p.transpose();
    }
    const double cnt = static_cast<double>(hi - lo);
    bc[b] /= cnt;
    bu[b] /= cnt;
    bp[b] /= cnt;
    rep.cross += bc[b];
    rep.unconj += bu[b];
    rep.abs2_pair += bp[b];
  }
  rep.cross /= static_cast<double>(n_batches);
  rep.unconj /= static_cast<double>(n_batches);
  rep.abs2_pair /= static_cast<double>(n_batches);

  for (std::size_t b = 0; b < n_batches; ++b) {
    rep.cross_se += (bc[b] - rep.cross).cwiseAbs2().real();
    rep.unconj_se += (bu[b] - rep.unconj).cwiseAbs2().real();
    rep.abs2_pair_se += (bp[b] - rep.abs2_pair).cwiseAbs2();
  }
  const double denom = static_cast<double>(n_batches) *
                       static_cast<double>(n_batches - 1);
  rep.cross_se = (rep.cross_se / denom).cwiseSqrt();
  rep.unconj_se = (rep.unconj_se / denom).cwiseSqrt();
  rep.abs2_pair_se = (rep.abs2_pair_se / denom).cwiseSqrt();
  return rep;
}

/// Analytic matrix elements <k|X|j> for a single particle in the centered
/// box [-A, A] (sine basis): zero on the diagonal and for even k-j,
/// -16Akj/(pi^2 (k^2-j^2)^2) for odd k-j.  Stands in for the intractable
/// toy-model eigenbasis.
inline Eigen::MatrixXd box_position_matrix(std::size_t n_modes, double A) {
  if (n_modes < 2) throw validation_error("box_position_matrix: n_modes >= 2");
  if (!(A > 0)) throw validation_error("box_position_matrix: A > 0");
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n_modes, n_modes);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  for (std::size_t k = 1; k <= n_modes; ++k)
    for (std::size_t j = 1; j <= n_modes; ++j) {
      if (((k + j) % 2) == 0) continue;  // includes k == j
      const double diff2 = static_cast<double>(k * k) - static_cast<double>(j * j);
      g(k - 1, j - 1) = -16.0 * A * static_cast<double>(k) *
                        static_cast<double>(j) / (pi2 * diff2 * diff2);
    }
  return g;
}

/// Box eigenvalues zeta_k = (hbar pi k)^2 / (2 M (2A)^2).
inline std::vector<double> box_spectrum(std::size_t n_modes, double A,
                                        double M = 1.0, double hbar = 1.0) {
  std::vector<double> zeta(n_modes);
  const double base = hbar * hbar * std::numbers::pi * std::numbers::pi /
                      (2.0 * M * 4.0 * A * A);
  for (std::size_t k = 1; k <= n_modes; ++k)
    zeta[k - 1] = base * static_cast<double>(k) * k;
  return zeta;
}

/// The pairing-reduced MSD:
/// E|x(t)-x(0)|^2 = 2 sum_{j,k} E(|c_k|^2 |c_j|^2) |g_{k,j}|^2
///                   {1 - cos[(omega_j - omega_k) t]}.
inline Trajectory msd_curve(const std::vector<double>& zeta,
                            const Eigen::MatrixXd& g,
                            const Eigen::MatrixXd& abs2_pair,
                            const std::vector<double>& times) {
  const std::size_t n = zeta.size();
  if (g.rows() != static_cast<Eigen::Index>(n) ||
      abs2_pair.rows() != static_cast<Eigen::Index>(n) || g.rows() != g.cols())
    throw structural_error("msd_curve: dimension mismatch");
  require_time_grid(times);
  Trajectory out;
  out.times = times;
  out.meta.generator = "msd-reduced";
  out.meta.truncation = n;
  for (double t : times) {
    KahanSum acc;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const double gjk = g(k, j);
        if (gjk == 0.0) continue;
        acc.add(2.0 * abs2_pair(k, j) * gjk * gjk *
                (1.0 - std::cos((zeta[j] - zeta[k]) * t)));
      }
    out.values.push_back(acc.value());
  }
  return out;
}

/// Direct route: evolve each sampled coefficient vector and average
/// |x(t)-x(0)|^2 (the four-index sum with empirical moments).  Returns the
/// mean curve and its per-time standard error.
struct MsdEstimate {
  Trajectory mean;
  std::vector<double> stderr_values;
};

inline MsdEstimate msd_direct_mc(const std::vector<CoefficientSample>& samples,
                                 const std::vector<double>& zeta,
                                 const Eigen::MatrixXd& g,
                                 const std::vector<double>& times) {
  if (samples.empty()) throw validation_error("msd_direct_mc: no samples");
  const std::size_t n = zeta.size();
  require_time_grid(times);
  MsdEstimate out;
  out.mean.times = times;
  out.mean.meta.generator = "msd-direct-mc";
  out.mean.meta.truncation = n;
  for (double t : times) {
    KahanSum sum, sum2;
    for (const auto& s : samples) {
      // x(t) = sum_{k,j} c_k^* c_j g_{k,j} e^{i(zeta_k - zeta_j) t}
      std::complex<double> xt = 0.0, x0 = 0.0;
      Eigen::VectorXcd ct(n);
      for (std::size_t k = 0; k < n; ++k)
        ct[k] = s.c[k] * std::polar(1.0, -zeta[k] * t);
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) {
          if (g(k, j) == 0.0) continue;
          xt += std::conj(ct[k]) * ct[j] * g(k, j);
          x0 += std::conj(s.c[k]) * s.c[j] * g(k, j);
        }
      const double d = std::norm(xt - x0);
      sum.add(d);
      sum2.add(d * d);
    }
    const double m = sum.value() / samples.size();
    const double var =
        std::max(0.0, sum2.value() / samples.size() - m * m);
    out.mean.values.push_back(m);
    out.stderr_values.push_back(std::sqrt(var / samples.size()));
  }
  return out;
}

/// Longest contiguous log-log window with slope within slope_tol of 1.
struct DiffusiveWindow {
  std::size_t first = 0, last = 0;  // inclusive index range into the input
  double slope = 0.0;
  double diffusion_constant = 0.0;  // e^{intercept}, i.e. msd ~ D t
  double r2 = 0.0;
};

inline std::optional<DiffusiveWindow> diffusive_window_detect(
    const Trajectory& msd, double slope_tol, std::size_t min_points = 8) {
  msd.validate();
  std::vector<double> lt, lv;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < msd.times.size(); ++i)
    if (msd.times[i] > 0.0 && msd.values[i] > 0.0) {
      lt.push_back(std::log(msd.times[i]));
      lv.push_back(std::log(msd.values[i]));
      keep.push_back(i);
    }
  if (lt.size() < 64 || lt.back() - lt.front() < 3.0 * std::numbers::ln10)
    throw validation_error(
        "diffusive_window_detect: need >= 64 positive points spanning >= 3 decades");

  // prefix sums make each window fit O(1)
  const std::size_t m = lt.size();
  std::vector<double> px(m + 1, 0), py(m + 1, 0), pxx(m + 1, 0), pxy(m + 1, 0),
      pyy(m + 1, 0);
  for (std::size_t i = 0; i < m; ++i) {
    px[i + 1] = px[i] + lt[i];
    py[i + 1] = py[i] + lv[i];
    pxx[i + 1] = pxx[i] + lt[i] * lt[i];
    pxy[i + 1] = pxy[i] + lt[i] * lv[i];
    pyy[i + 1] = pyy[i] + lv[i] * lv[i];
  }
  auto window_fit = [&](std::size_t i, std::size_t j, double& a, double& b,
                        double& r2) {
    const double n = static_cast<double>(j - i + 1);
    const double sx = px[j + 1] - px[i], sy = py[j + 1] - py[i];
    const double sxx = pxx[j + 1] - pxx[i], sxy = pxy[j + 1] - pxy[i];
    const double syy = pyy[j + 1] - pyy[i];
    const double den = n * sxx - sx * sx;
    b = (n * sxy - sx * sy) / den;
    a = (sy - b * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    const double ss_exp = b * (sxy - sx * sy / n);
    r2 = ss_tot > 0 ? ss_exp / ss_tot : 1.0;
  };

  std::optional<DiffusiveWindow> best;
  std::size_t best_len = 0;
  for (std::size_t i = 0; i + min_points <= m; ++i)
    for (std::size_t j = i + min_points - 1; j < m; ++j) {
      double a, b, r2;
      window_fit(i, j, a, b, r2);
      if (std::abs(b - 1.0) <= slope_tol && j - i + 1 > best_len) {
        best = DiffusiveWindow{keep[i], keep[j], b, std::exp(a), r2};
        best_len = j - i + 1;
      }
    }
  return best;
}

}  // namespace qplab
