#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "qplab/signals.hpp"

using namespace qplab;
using std::numbers::pi;

namespace {

// Oracle: brute-force term-by-term summation in extended precision.
double evaluate_qp_oracle(const QuasiPeriodicSignal& s, double t) {
  long double acc = s.offset;
  for (std::size_t n = 0; n < s.amplitudes.size(); ++n) {
    const long double ph = static_cast<long double>(s.frequencies[n]) * t;
    acc += static_cast<long double>(s.amplitudes[n].real()) * std::cos(ph) -
           static_cast<long double>(s.amplitudes[n].imag()) * std::sin(ph);
  }
  return static_cast<double>(acc);
}

}  // namespace

TEST_CASE("evaluate_qp: zero-frequency constant") {
  QuasiPeriodicSignal s;
  s.amplitudes = {1.0};
  s.frequencies = {0.0};
  const auto out = evaluate_qp(s, {0.7});
  REQUIRE(out.values[0] == 1.0);
}

TEST_CASE("evaluate_qp: Re e^{i pi} = -1") {
  QuasiPeriodicSignal s;
  s.amplitudes = {1.0};
  s.frequencies = {pi};
  const auto out = evaluate_qp(s, {1.0});
  REQUIRE(out.values[0] == Catch::Approx(-1.0).margin(1e-15));
}

TEST_CASE("evaluate_qp: matches extended-precision oracle") {
  QuasiPeriodicSignal s;
  s.amplitudes = {0.5, 1.0 / 3.0};
  s.frequencies = {1.0, 2.0};
  const auto out = evaluate_qp(s, {0.5});
  REQUIRE(out.values[0] ==
          Catch::Approx(evaluate_qp_oracle(s, 0.5)).margin(1e-15));
}

TEST_CASE("evaluate_qp: oracle agreement on a large random signal") {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> nd;
  QuasiPeriodicSignal s;
  for (int i = 0; i < 500; ++i) {
    s.amplitudes.emplace_back(nd(gen), nd(gen));
    s.frequencies.push_back(10.0 * nd(gen));
  }
  for (double t : {0.0, 0.3, 1.7}) {
    const auto out = evaluate_qp(s, {t});
    REQUIRE(out.values[0] ==
            Catch::Approx(evaluate_qp_oracle(s, t)).margin(1e-11));
  }
}

TEST_CASE("evaluate_qp: linearity under concatenation") {
  std::mt19937_64 gen(12);
  std::normal_distribution<double> nd;
  QuasiPeriodicSignal a, b, both;
  a.offset = 0.25;
  b.offset = -0.5;
  for (int i = 0; i < 40; ++i) {
    a.amplitudes.emplace_back(nd(gen), nd(gen));
    a.frequencies.push_back(nd(gen));
    b.amplitudes.emplace_back(nd(gen), nd(gen));
    b.frequencies.push_back(nd(gen));
  }
  both = a;
  both.offset += b.offset;
  both.amplitudes.insert(both.amplitudes.end(), b.amplitudes.begin(),
                         b.amplitudes.end());
  both.frequencies.insert(both.frequencies.end(), b.frequencies.begin(),
                          b.frequencies.end());
  const std::vector<double> ts = {0.0, 0.4, 2.2};
  const auto ea = evaluate_qp(a, ts), eb = evaluate_qp(b, ts),
             eboth = evaluate_qp(both, ts);
  for (std::size_t i = 0; i < ts.size(); ++i)
    REQUIRE(eboth.values[i] ==
            Catch::Approx(ea.values[i] + eb.values[i]).margin(1e-12));
}

TEST_CASE("evaluate_qp: conjugate symmetry") {
  std::mt19937_64 gen(13);
  std::normal_distribution<double> nd;
  QuasiPeriodicSignal s, conj;
  for (int i = 0; i < 40; ++i) {
    s.amplitudes.emplace_back(nd(gen), nd(gen));
    s.frequencies.push_back(nd(gen));
    conj.amplitudes.push_back(std::conj(s.amplitudes.back()));
    conj.frequencies.push_back(-s.frequencies.back());
  }
  const std::vector<double> ts = {0.0, 0.9, 3.1};
  const auto e1 = evaluate_qp(s, ts), e2 = evaluate_qp(conj, ts);
  for (std::size_t i = 0; i < ts.size(); ++i)
    REQUIRE(e1.values[i] == Catch::Approx(e2.values[i]).margin(1e-13));
}

TEST_CASE("evaluate_qp: reordering stays within summation tolerance") {
  std::mt19937_64 gen(14);
  std::normal_distribution<double> nd;
  QuasiPeriodicSignal s;
  for (int i = 0; i < 10000; ++i) {
    s.amplitudes.emplace_back(nd(gen), nd(gen));
    s.frequencies.push_back(5.0 * nd(gen));
  }
  QuasiPeriodicSignal rev = s;
  std::reverse(rev.amplitudes.begin(), rev.amplitudes.end());
  std::reverse(rev.frequencies.begin(), rev.frequencies.end());
  const auto e1 = evaluate_qp(s, {0.37});
  const auto e2 = evaluate_qp(rev, {0.37});
  REQUIRE(std::abs(e1.values[0] - e2.values[0]) < 1e-10);
}

TEST_CASE("evaluate_qp: input validation") {
  QuasiPeriodicSignal s;
  s.amplitudes = {1.0};
  REQUIRE_THROWS_AS(evaluate_qp(s, {0.0}), structural_error);
  s.frequencies = {std::nan("")};
  REQUIRE_THROWS_AS(evaluate_qp(s, {0.0}), validation_error);
  s.frequencies = {1.0};
  REQUIRE_THROWS_AS(evaluate_qp(s, {1.0, 1.0}), validation_error);
}

TEST_CASE("classify_convergence: 1/n^3 amplitudes stall (both sums)") {
  const auto v = classify_convergence(
      [](std::size_t n) { return 1.0 / (static_cast<double>(n) * n * n); },
      [](std::size_t n) { return static_cast<double>(n); }, 100000, 16);
  REQUIRE(v.verdict == Verdict::Nbml);
  // partial-sum oracle: both limits finite
  REQUIRE(v.sum_abs_a.back() == Catch::Approx(1.2020569).margin(1e-4));
  REQUIRE(v.sum_abs_a_nu.back() ==
          Catch::Approx(std::numbers::pi * std::numbers::pi / 6).margin(1e-4));
}

TEST_CASE("classify_convergence: 1/n^2 amplitudes keep growing via |a||nu|") {
  const auto v = classify_convergence(
      [](std::size_t n) { return 1.0 / (static_cast<double>(n) * n); },
      [](std::size_t n) { return static_cast<double>(n); }, 100000, 16);
  REQUIRE(v.verdict == Verdict::BmlCandidate);
  // harmonic-sum oracle: S(N) ~ ln N + gamma
  REQUIRE(v.sum_abs_a_nu.back() ==
          Catch::Approx(std::log(1e5) + 0.5772156649).margin(1e-3));
}

TEST_CASE("classify_convergence: finite list is an oscillation") {
  const auto v = classify_convergence({{1.0, 0.0}, {1.0, 0.0}}, {1.0, 2.0},
                                      100000, 16);
  REQUIRE(v.verdict == Verdict::Nbml);
  REQUIRE(v.rationale.find("finite") != std::string::npos);
}

TEST_CASE("classify_convergence: empty input is NBML") {
  const auto v = classify_convergence(std::vector<std::complex<double>>{},
                                      std::vector<double>{}, 1000, 8);
  REQUIRE(v.verdict == Verdict::Nbml);
}

TEST_CASE("classify_convergence: partial sums nondecreasing") {
  const auto v = classify_convergence(
      [](std::size_t n) { return 1.0 / (static_cast<double>(n) * n); },
      [](std::size_t n) { return static_cast<double>(n); }, 20000, 8);
  for (std::size_t i = 1; i < v.sum_abs_a.size(); ++i) {
    REQUIRE(v.sum_abs_a[i] >= v.sum_abs_a[i - 1]);
    REQUIRE(v.sum_abs_a_nu[i] >= v.sum_abs_a_nu[i - 1]);
  }
}

TEST_CASE("classify_convergence: precondition checks") {
  REQUIRE_THROWS_AS(
      classify_convergence([](std::size_t) { return 1.0; },
                           [](std::size_t) { return 1.0; }, 4, 8),
      validation_error);
}
