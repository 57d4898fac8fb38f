#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "qplab/errors.hpp"
#include "qplab/trajectory.hpp"

namespace qplab {

/// Relative growth below which a partial-sum tail counts as stalled
/// (averaged per term over the growth window).
inline constexpr double kStallTol = 1e-9;

/// f(t) = offset + Re sum_n a_n exp(i nu_n t).  Frequencies are radians per
/// unit time; a sin(pi n t) series is stored as nu_n = pi*n.
struct QuasiPeriodicSignal {
  std::vector<std::complex<double>> amplitudes;
  std::vector<double> frequencies;
  double offset = 0.0;

  void validate() const {
    if (amplitudes.size() != frequencies.size())
      throw structural_error("signal: amplitude/frequency length mismatch");
    if (!std::isfinite(offset))
      throw validation_error("signal: non-finite offset");
    for (std::size_t i = 0; i < amplitudes.size(); ++i) {
      if (!std::isfinite(amplitudes[i].real()) ||
          !std::isfinite(amplitudes[i].imag()) ||
          !std::isfinite(frequencies[i]))
        throw validation_error("signal: non-finite term");
    }
  }
};

inline Trajectory evaluate_qp(const QuasiPeriodicSignal& signal,
                              const std::vector<double>& times) {
  signal.validate();
  require_time_grid(times);
  Trajectory out;
  out.times = times;
  out.values.reserve(times.size());
  out.meta.generator = "evaluate_qp";
  out.meta.truncation = signal.amplitudes.size();
  for (double t : times) {
    KahanSum acc;
    for (std::size_t n = 0; n < signal.amplitudes.size(); ++n) {
      const double ph = signal.frequencies[n] * t;
      acc.add(signal.amplitudes[n].real() * std::cos(ph) -
              signal.amplitudes[n].imag() * std::sin(ph));
    }
    out.values.push_back(signal.offset + acc.value());
  }
  return out;
}

enum class Verdict { BmlCandidate, Nbml, Inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::BmlCandidate: return "BML-candidate";
    case Verdict::Nbml: return "NBML";
    default: return "inconclusive";
  }
}

/// Partial-sum tables of sum|a_n| and sum|a_n||nu_n| with a stall-based
/// verdict.  The verdict is a numerical heuristic at the stated budget, not
/// a proof of convergence or divergence.
struct ConvergenceVerdict {
  std::vector<std::size_t> term_counts;  // checkpoint indices
  std::vector<double> sum_abs_a;         // partial sums at checkpoints
  std::vector<double> sum_abs_a_nu;
  Verdict verdict = Verdict::Inconclusive;
  std::string rationale;
  std::size_t budget = 0;
};

namespace detail {

// Tail growth averaged per term over the last `window` terms, relative to
// the final sum.
inline bool stalled(double final_sum, double sum_before_window,
                    std::size_t window) {
  const double denom =
      (final_sum > 0.0 ? final_sum : 1.0) * static_cast<double>(window);
  return (final_sum - sum_before_window) / denom < kStallTol;
}

}  // namespace detail

/// Terms are produced by 1-based generators |a_n|, |nu_n|.  A sequence that
/// runs out before the budget (generator returns NaN-free zero terms via the
/// span overload below) stalls by construction: a finite frequency set is an
/// oscillation, hence NBML.
inline ConvergenceVerdict classify_convergence(
    const std::function<double(std::size_t)>& abs_a,
    const std::function<double(std::size_t)>& abs_nu, std::size_t term_budget,
    std::size_t growth_window) {
  if (growth_window < 2 || term_budget < growth_window)
    throw validation_error("classify_convergence: need budget >= window >= 2");

  ConvergenceVerdict out;
  out.budget = term_budget;
  KahanSum s_a, s_anu;
  // ring buffers holding the last window+1 partial sums
  std::vector<double> ring_a(growth_window + 1, 0.0);
  std::vector<double> ring_anu(growth_window + 1, 0.0);
  std::size_t next_checkpoint = 1;
  bool bad = false;
  for (std::size_t n = 1; n <= term_budget; ++n) {
    const double a = std::abs(abs_a(n));
    const double nu = std::abs(abs_nu(n));
    if (!std::isfinite(a) || !std::isfinite(nu)) {
      bad = true;
      break;
    }
    s_a.add(a);
    s_anu.add(a * nu);
    ring_a[n % (growth_window + 1)] = s_a.value();
    ring_anu[n % (growth_window + 1)] = s_anu.value();
    if (n == next_checkpoint || n == term_budget) {
      out.term_counts.push_back(n);
      out.sum_abs_a.push_back(s_a.value());
      out.sum_abs_a_nu.push_back(s_anu.value());
      next_checkpoint += std::max<std::size_t>(1, next_checkpoint / 2);
      if (next_checkpoint > term_budget) next_checkpoint = term_budget;
    }
  }
  if (bad) {
    out.verdict = Verdict::Inconclusive;
    out.rationale = "non-finite term encountered";
    return out;
  }
  const std::size_t before = (term_budget - growth_window) % (growth_window + 1);
  const bool a_stalled =
      detail::stalled(s_a.value(), ring_a[before], growth_window);
  const bool anu_stalled =
      detail::stalled(s_anu.value(), ring_anu[before], growth_window);
  if (a_stalled && anu_stalled) {
    out.verdict = Verdict::Nbml;
    out.rationale =
        "both partial-sum tails stalled at budget " + std::to_string(term_budget) +
        " (heuristic, not a proof)";
  } else {
    out.verdict = Verdict::BmlCandidate;
    out.rationale = std::string("tail still growing: ") +
                    (a_stalled ? "" : "sum|a_n| ") +
                    (anu_stalled ? "" : "sum|a_n||nu_n| ") + "at budget " +
                    std::to_string(term_budget) + " (heuristic, not a proof)";
  }
  return out;
}

/// Concrete finite sequences.  Terms past the end contribute zero, so a
/// finite list always stalls and classifies NBML.
inline ConvergenceVerdict classify_convergence(
    const std::vector<std::complex<double>>& amplitudes,
    const std::vector<double>& frequencies, std::size_t term_budget,
    std::size_t growth_window) {
  if (amplitudes.size() != frequencies.size())
    throw structural_error("classify_convergence: length mismatch");
  if (amplitudes.empty()) {
    ConvergenceVerdict out;
    out.budget = term_budget;
    out.verdict = Verdict::Nbml;
    out.rationale = "finite/empty sum: an oscillation, not BML";
    return out;
  }
  const std::size_t len = amplitudes.size();
  auto a = [&](std::size_t n) {
    return n <= len ? std::abs(amplitudes[n - 1]) : 0.0;
  };
  auto nu = [&](std::size_t n) {
    return n <= len ? std::abs(frequencies[n - 1]) : 0.0;
  };
  auto out = classify_convergence(a, nu, term_budget, growth_window);
  if (out.verdict == Verdict::Nbml && len < term_budget)
    out.rationale = "finite sum of " + std::to_string(len) +
                    " terms: an oscillation, not BML";
  return out;
}

}  // namespace qplab
