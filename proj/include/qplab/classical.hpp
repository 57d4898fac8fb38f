#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "qplab/errors.hpp"
#include "qplab/rng.hpp"
#include "qplab/trajectory.hpp"

namespace qplab {

struct OUParams {
  double gamma = 10.0;     // friction, inverse time
  std::size_t n_terms = 1000;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(gamma > 0.0)) throw validation_error("ou: gamma must be positive");
    if (n_terms < 1) throw validation_error("ou: n_terms must be >= 1");
  }
};

enum class CoefDistribution { Gaussian, SphereUniform };

inline std::string to_string(CoefDistribution d) {
  return d == CoefDistribution::Gaussian ? "gaussian" : "sphere-uniform";
}

/// One draw a_0..a_N of real series coefficients.
struct CoefficientDraw {
  std::vector<double> a;
  CoefDistribution distribution = CoefDistribution::Gaussian;
  std::uint64_t seed = 0;
};

/// Deterministic given (seed, stream, n_terms, distribution).  Stream picks
/// the RNG substream; Monte Carlo ensembles use one stream per path.
inline CoefficientDraw draw_coefficients(std::size_t n_terms,
                                         std::uint64_t seed,
                                         CoefDistribution dist,
                                         std::uint64_t stream = 0) {
  if (n_terms < 1) throw validation_error("draw_coefficients: n_terms >= 1");
  CoefficientDraw out;
  out.distribution = dist;
  out.seed = seed;
  out.a.resize(n_terms + 1);
  CounterRng rng(seed, stream);
  for (double& x : out.a) x = rng.normal();
  if (dist == CoefDistribution::SphereUniform) {
    KahanSum ss;
    for (double x : out.a) ss.add(x * x);
    const double inv = 1.0 / std::sqrt(ss.value());
    for (double& x : out.a) x *= inv;
  }
  return out;
}

/// w(t) = a_0 t + sum_{n>=1} a_n sin(pi n t)/(pi n), valid on [0,1].
inline Trajectory wiener_series_sample(const CoefficientDraw& draw,
                                       const std::vector<double>& times) {
  require_time_grid(times);
  for (double t : times)
    if (t < 0.0 || t > 1.0)
      throw validation_error("wiener_series_sample: time outside [0,1]");
  const std::size_t n_terms = draw.a.size() - 1;
  Trajectory out;
  out.times = times;
  out.values.reserve(times.size());
  out.meta = {draw.seed, n_terms, "wiener-series"};
  const double pi = std::numbers::pi;
  for (double t : times) {
    KahanSum acc;
    acc.add(draw.a[0] * t);
    for (std::size_t n = 1; n <= n_terms; ++n)
      acc.add(draw.a[n] * std::sin(pi * n * t) / (pi * n));
    out.values.push_back(acc.value());
  }
  return out;
}

/// Complex Wiener construction via the orthonormal exponential basis
/// {e^{2 pi i n s}}_{n in Z} of L^2[0,1]:
///   w_c(t) = a_0 t + sum_{n>=1} [ pos_n (e^{ 2 pi i n t} - 1)/( 2 pi i n)
///                               + neg_n (e^{-2 pi i n t} - 1)/(-2 pi i n) ].
/// The coefficients multiply the Fourier coefficients of the indicator of
/// [0, t], so Parseval gives E|w_c(t)|^2 = t exactly (i.i.d. unit-variance
/// coefficients over the full integer index set; a one-sided half-integer
/// family is not orthonormal and picks up an extra t^2/2).
inline std::vector<std::complex<double>> wiener_complex_sample(
    const CoefficientDraw& pos, const CoefficientDraw& neg,
    const std::vector<double>& times) {
  require_time_grid(times);
  for (double t : times)
    if (t < 0.0 || t > 1.0)
      throw validation_error("wiener_complex_sample: time outside [0,1]");
  if (pos.a.size() != neg.a.size())
    throw structural_error("wiener_complex_sample: draw length mismatch");
  const std::size_t n_terms = pos.a.size() - 1;
  const double pi = std::numbers::pi;
  std::vector<std::complex<double>> out;
  out.reserve(times.size());
  for (double t : times) {
    KahanSum re, im;
    re.add(pos.a[0] * t);
    for (std::size_t n = 1; n <= n_terms; ++n) {
      const std::complex<double> cp =
          (std::polar(1.0, 2.0 * pi * n * t) - 1.0) /
          std::complex<double>(0.0, 2.0 * pi * static_cast<double>(n));
      re.add(pos.a[n] * cp.real() + neg.a[n] * cp.real());
      im.add(pos.a[n] * cp.imag() - neg.a[n] * cp.imag());
    }
    out.emplace_back(re.value(), im.value());
  }
  return out;
}

/// Deterministic coefficient multiplying a_n in the OU position series at
/// time t (n = 0 is the drift term).  The series sample below is the same
/// sum grouped as printed; this form feeds the closed-form ensemble
/// variance sum_n coef_n(t)^2 for unit-variance coefficients.
inline double ou_basis_coefficient(double gamma, std::size_t n, double t) {
  if (n == 0) return t / gamma - (-std::expm1(-gamma * t)) / (gamma * gamma);
  const double pi = std::numbers::pi;
  const double d = gamma * gamma + pi * pi * n * n;
  return (gamma * std::sin(pi * n * t) / (pi * n) + (1.0 - std::cos(pi * n * t)) +
          std::expm1(-gamma * t)) /
         d;
}

inline double ou_series_variance(double gamma, std::size_t n_terms, double t) {
  KahanSum acc;
  for (std::size_t n = 0; n <= n_terms; ++n) {
    const double c = ou_basis_coefficient(gamma, n, t);
    acc.add(c * c);
  }
  return acc.value();
}

/// Re x_c(t): the sin series with weights gamma/((gamma^2+pi^2 n^2) pi n),
/// the (1-cos) series with weights 1/(gamma^2+pi^2 n^2), the a_0 t/gamma
/// drift, and the transient -(1/gamma)(1-e^{-gamma t})(sum_n a_n gamma/(gamma^2+pi^2 n^2) + a_0/gamma).
inline Trajectory ou_series_sample(const OUParams& params,
                                   const CoefficientDraw& draw,
                                   const std::vector<double>& times) {
  params.validate();
  require_time_grid(times);
  for (double t : times)
    if (t < 0.0 || t > 1.0)
      throw validation_error("ou_series_sample: time outside [0,1]");
  if (draw.a.size() != params.n_terms + 1)
    throw structural_error("ou_series_sample: draw length != n_terms + 1");

  const double g = params.gamma;
  const double pi = std::numbers::pi;
  KahanSum lorentzian;  // sum_n a_n gamma/(gamma^2 + pi^2 n^2)
  for (std::size_t n = 1; n <= params.n_terms; ++n)
    lorentzian.add(draw.a[n] * g / (g * g + pi * pi * n * n));
  const double transient_weight = lorentzian.value() + draw.a[0] / g;

  Trajectory out;
  out.times = times;
  out.values.reserve(times.size());
  out.meta = {draw.seed, params.n_terms, "ou-series"};
  for (double t : times) {
    KahanSum acc;
    for (std::size_t n = 1; n <= params.n_terms; ++n) {
      const double d = g * g + pi * pi * n * n;
      acc.add(draw.a[n] * (g / d) * std::sin(pi * n * t) / (pi * n));
      acc.add(draw.a[n] * (1.0 - std::cos(pi * n * t)) / d);
    }
    acc.add(draw.a[0] * t / g);
    acc.add(-(1.0 / g) * (-std::expm1(-g * t)) * transient_weight);
    out.values.push_back(acc.value());
  }
  return out;
}

/// MSD of the OU position started from v(0)=0, unit noise intensity:
/// (1/gamma^2) { t + (1/2gamma)[1-e^{-2gamma t}] - (2/gamma)[1-e^{-gamma t}] }.
/// expm1 keeps the gamma^2 t^3/3 leading behavior at small gamma*t.
inline double ou_msd_analytic(double gamma, double t) {
  if (!(gamma > 0.0)) throw validation_error("ou_msd_analytic: gamma > 0");
  if (t < 0.0) throw validation_error("ou_msd_analytic: t >= 0");
  const double e1 = -std::expm1(-gamma * t);       // 1 - e^{-gt}
  const double e2 = -std::expm1(-2.0 * gamma * t); // 1 - e^{-2gt}
  return (t + e2 / (2.0 * gamma) - 2.0 * e1 / gamma) / (gamma * gamma);
}

struct OUPath {
  Trajectory position;
  std::vector<double> velocity;
};

/// Independent oracle for the series formula: velocity sampled from the
/// exact OU Gaussian transition kernel on the grid, position by trapezoid.
inline OUPath ou_exact_sample(double gamma, const std::vector<double>& times,
                              std::uint64_t seed, std::uint64_t stream = 0) {
  if (!(gamma > 0.0)) throw validation_error("ou_exact_sample: gamma > 0");
  require_time_grid(times);
  if (times.empty() || times.front() < 0.0)
    throw validation_error("ou_exact_sample: need times starting at >= 0");

  CounterRng rng(seed, stream);
  OUPath out;
  out.position.times = times;
  out.position.meta = {seed, 0, "ou-exact"};
  out.velocity.reserve(times.size());
  out.position.values.reserve(times.size());

  // march from t=0 with v(0)=0, x(0)=0
  double tprev = 0.0, v = 0.0, x = 0.0;
  for (double t : times) {
    const double dt = t - tprev;
    if (dt > 0.0) {
      const double decay = std::exp(-gamma * dt);
      const double sd = std::sqrt(-std::expm1(-2.0 * gamma * dt) / (2.0 * gamma));
      const double vnew = decay * v + sd * rng.normal();
      x += 0.5 * dt * (v + vnew);
      v = vnew;
    }
    out.velocity.push_back(v);
    out.position.values.push_back(x);
    tprev = t;
  }
  return out;
}

}  // namespace qplab
