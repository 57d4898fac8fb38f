#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "qplab/errors.hpp"
#include "qplab/signals.hpp"

namespace qplab {

/// Ascending Dirichlet eigenvalues with optional multi-index labels.
struct SpectrumModel {
  std::vector<double> eigenvalues;
  std::vector<std::string> labels;
  std::string source;

  void validate() const {
    if (!labels.empty() && labels.size() != eigenvalues.size())
      throw structural_error("spectrum: label/eigenvalue length mismatch");
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
      if (!(eigenvalues[i] > 0.0))
        throw validation_error("spectrum: eigenvalues must be positive");
      if (i > 0 && eigenvalues[i] < eigenvalues[i - 1])
        throw validation_error("spectrum: eigenvalues must ascend");
    }
  }
};

/// Hard-wall interval [-A, A] holding n_right + n_left light particles of
/// mass m plus one heavy particle of mass M.  B and C partition the interval
/// for the immersed rectangle.  The symmetric toy model has n_right =
/// n_left = N; the planar triangle comparison uses (1, 0).
struct BoxGeometry {
  double A = 0.5;
  double B = -1.0 / 6.0;
  double C = 1.0 / 6.0;
  std::size_t n_right = 1;
  std::size_t n_left = 1;
  double m = 1.0;
  double M = 1.0;
  double hbar = 1.0;

  static BoxGeometry symmetric(std::size_t N) {
    BoxGeometry g;
    g.n_right = g.n_left = N;
    return g;
  }

  void validate() const {
    if (!(-A < B && B < C && C < A))
      throw validation_error("box: need -A < B < C < A");
    if (!(m > 0 && M > 0 && A > 0 && hbar > 0))
      throw validation_error("box: masses, A, hbar must be positive");
    if (n_right + n_left < 1)
      throw validation_error("box: need at least one light particle");
  }
};

namespace detail {

struct SeparableCoord {
  double scale;       // (hbar*pi)^2 / (2*mass*len^2), multiplies n^2
  std::string label;  // coordinate name, e.g. "R1", "X"
};

// Enumerate all multi-indices with sum scale_i * n_i^2 <= cutoff.
inline void enumerate_box(const std::vector<SeparableCoord>& coords,
                          double cutoff, SpectrumModel& out) {
  std::vector<std::size_t> idx(coords.size(), 1);
  std::vector<double> partial(coords.size() + 1, 0.0);
  std::size_t level = 0;
  while (true) {
    const double e =
        partial[level] + coords[level].scale * idx[level] * idx[level];
    if (e <= cutoff) {
      if (level + 1 == coords.size()) {
        std::string label = "(";
        for (std::size_t i = 0; i < coords.size(); ++i)
          label += (i ? "," : "") + std::to_string(idx[i]);
        label += ")";
        out.eigenvalues.push_back(e);
        out.labels.push_back(std::move(label));
        ++idx[level];
      } else {
        partial[level + 1] = e;
        ++level;
        idx[level] = 1;
      }
    } else {
      if (level == 0) break;
      idx[level - 1] += 1;
      --level;
    }
  }
}

inline SpectrumModel rectangle_spectrum(
    const std::vector<SeparableCoord>& coords, double cutoff,
    const std::string& source) {
  SpectrumModel out;
  out.source = source;
  enumerate_box(coords, cutoff, out);
  if (out.eigenvalues.empty())
    throw validation_error(source + ": cutoff below the ground state");
  std::vector<std::size_t> order(out.eigenvalues.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out.eigenvalues[a] < out.eigenvalues[b];
  });
  SpectrumModel sorted;
  sorted.source = source;
  for (std::size_t i : order) {
    sorted.eigenvalues.push_back(out.eigenvalues[i]);
    sorted.labels.push_back(out.labels[i]);
  }
  return sorted;
}

inline std::vector<SeparableCoord> box_coords(const BoxGeometry& g,
                                              double len_right,
                                              double len_left, double len_X) {
  const double pi = std::numbers::pi;
  const double hp2 = g.hbar * g.hbar * pi * pi;
  std::vector<SeparableCoord> coords;
  for (std::size_t j = 1; j <= g.n_right; ++j)
    coords.push_back({hp2 / (2.0 * g.m * len_right * len_right),
                      "R" + std::to_string(j)});
  for (std::size_t j = 1; j <= g.n_left; ++j)
    coords.push_back({hp2 / (2.0 * g.m * len_left * len_left),
                      "L" + std::to_string(j)});
  coords.push_back({hp2 / (2.0 * g.M * len_X * len_X), "X"});
  return coords;
}

}  // namespace detail

/// Lower bounds: every coordinate ranges over the full interval (-A, A).
inline SpectrumModel surrounding_rectangle_spectrum(const BoxGeometry& geom,
                                                    double cutoff) {
  geom.validate();
  const double len = 2.0 * geom.A;
  return detail::rectangle_spectrum(detail::box_coords(geom, len, len, len),
                                    cutoff, "surrounding");
}

/// Upper bounds: right particles on (C, A), left particles on (-A, B),
/// heavy particle on (B, C).
inline SpectrumModel immersed_rectangle_spectrum(const BoxGeometry& geom,
                                                 double cutoff) {
  geom.validate();
  return detail::rectangle_spectrum(
      detail::box_coords(geom, geom.A - geom.C, geom.B + geom.A,
                         geom.C - geom.B),
      cutoff, "immersed");
}

/// Partial sums of sum 1/(k_1^2+...+k_N^2) over index cubes of growing side,
/// with a growth-rate fit and a stall-based divergence verdict.
struct DivergenceReport {
  std::vector<std::size_t> cube_sides;  // K
  std::vector<double> partial_sums;     // S(K)
  double fit_intercept = 0.0;
  double fit_slope = 0.0;   // vs ln K (N=2) or ln-ln slope (N>=3)
  double fit_r2 = 0.0;
  std::string fit_model;
  bool divergent = false;
  std::size_t budget = 0;
};

namespace detail {

// least squares y = a + b x, returns (a, b, R^2)
inline void linear_fit(const std::vector<double>& x,
                       const std::vector<double>& y, double& a, double& b,
                       double& r2) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  b = (n * sxy - sx * sy) / den;
  a = (sy - b * sx) / n;
  double ss_res = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (a + b * x[i]);
    ss_res += e * e;
  }
  const double ss_tot = syy - sy * sy / n;
  r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
}

// sum of 1/(base + k_1^2+...+k_d^2) over [1,limit]^d
inline double inner_cube_sum(std::size_t d, std::size_t limit, double base) {
  if (d == 0) return 1.0 / base;
  if (limit == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t k = 1; k <= limit; ++k)
    sum += inner_cube_sum(d - 1, limit, base + static_cast<double>(k) * k);
  return sum;
}

// sum over the shell max(k_1..k_N) == K, partitioned by how many
// coordinates equal K
inline double index_shell_sum(std::size_t N, std::size_t K) {
  double sum = 0.0;
  double binom = 1.0;  // C(N, c)
  for (std::size_t c = 1; c <= N; ++c) {
    binom = binom * (N - c + 1) / c;
    sum += binom * inner_cube_sum(N - c, K - 1,
                                  static_cast<double>(c) * K * K);
    if (N == c) break;
  }
  return sum;
}

}  // namespace detail

/// budget = largest cube side K.  N=1 converges (Basel); N>=2 diverges.
inline DivergenceReport inverse_square_sum(std::size_t N, std::size_t budget) {
  if (N < 1) throw validation_error("inverse_square_sum: N >= 1");
  if (budget < 100) throw validation_error("inverse_square_sum: budget >= 100");
  DivergenceReport out;
  out.budget = budget;
  KahanSum acc;
  double tail_growth = 0.0;       // growth over the last tail_terms terms
  std::size_t tail_terms = std::min<std::size_t>(64, budget / 2);
  if (N == 1) {
    std::size_t next_cp = 1;
    for (std::size_t k = 1; k <= budget; ++k) {
      const double term = 1.0 / (static_cast<double>(k) * k);
      acc.add(term);
      if (k > budget - tail_terms) tail_growth += term;
      if (k == next_cp || k == budget) {
        out.cube_sides.push_back(k);
        out.partial_sums.push_back(acc.value());
        next_cp += std::max<std::size_t>(1, next_cp / 2);
        if (next_cp > budget) next_cp = budget;
      }
    }
  } else {
    // shell-by-shell; cost is O(budget^N), callers keep budget modest
    for (std::size_t K = 1; K <= budget; ++K) {
      const double shell = detail::index_shell_sum(N, K);
      acc.add(shell);
      if (K > budget - tail_terms) tail_growth += shell;
      out.cube_sides.push_back(K);
      out.partial_sums.push_back(acc.value());
    }
  }

  // fit the growth model on the upper half of the table
  std::vector<double> xs, ys;
  for (std::size_t i = out.cube_sides.size() / 2; i < out.cube_sides.size();
       ++i) {
    if (N == 2) {
      xs.push_back(std::log(static_cast<double>(out.cube_sides[i])));
      ys.push_back(out.partial_sums[i]);
    } else if (N >= 3) {
      xs.push_back(std::log(static_cast<double>(out.cube_sides[i])));
      ys.push_back(std::log(out.partial_sums[i]));
    }
  }
  if (N == 2) {
    detail::linear_fit(xs, ys, out.fit_intercept, out.fit_slope, out.fit_r2);
    out.fit_model = "S = a + b ln K";
  } else if (N >= 3) {
    detail::linear_fit(xs, ys, out.fit_intercept, out.fit_slope, out.fit_r2);
    out.fit_model = "ln S = a + b ln K (power law)";
  } else {
    out.fit_model = "none (convergent)";
  }

  // stall verdict on the tail, per the signals tolerance
  out.divergent =
      tail_growth / (out.partial_sums.back() * tail_terms) >= kStallTol;
  return out;
}

/// Partial sums of sum_k 1/zeta_k for a concrete spectrum (feeds the
/// Corollary discussion); verdict by the shared stall tolerance.
struct InverseSpectrumSum {
  std::vector<std::size_t> term_counts;
  std::vector<double> partial_sums;
  bool convergent_at_budget = false;
  std::size_t budget = 0;
};

inline InverseSpectrumSum inverse_spectrum_sum(const SpectrumModel& spectrum,
                                               std::size_t growth_window = 64) {
  spectrum.validate();
  const std::size_t n = spectrum.eigenvalues.size();
  if (n < 2) throw validation_error("inverse_spectrum_sum: need >= 2 modes");
  InverseSpectrumSum out;
  out.budget = n;
  KahanSum acc;
  std::size_t next_cp = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    acc.add(1.0 / spectrum.eigenvalues[k - 1]);
    if (k == next_cp || k == n) {
      out.term_counts.push_back(k);
      out.partial_sums.push_back(acc.value());
      next_cp += std::max<std::size_t>(1, next_cp / 2);
      if (next_cp > n) next_cp = n;
    }
  }
  const std::size_t w = std::min<std::size_t>(growth_window, n - 1);
  KahanSum tail;
  for (std::size_t k = n - w + 1; k <= n; ++k)
    tail.add(1.0 / spectrum.eigenvalues[k - 1]);
  out.convergent_at_budget = tail.value() / (acc.value() * w) < kStallTol;
  return out;
}

}  // namespace qplab
