#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "qplab/spectra.hpp"
#include "qplab/triangle.hpp"

using namespace qplab;
using std::numbers::pi;

TEST_CASE("surrounding rectangle: N=1 ground state is 3 pi^2 / 2") {
  BoxGeometry g;  // A = 1/2, m = M = hbar = 1, one right + one left particle
  const auto s = surrounding_rectangle_spectrum(g, 100.0);
  // direct substitution oracle: (pi^2/2)(1 + 1) + (pi^2/2)(1) with 2A = 1
  REQUIRE(s.eigenvalues[0] == Catch::Approx(3.0 * pi * pi / 2.0).epsilon(1e-14));
  REQUIRE(s.labels[0] == "(1,1,1)");
}

TEST_CASE("surrounding rectangle: doubling A divides eigenvalues by 4") {
  BoxGeometry g1, g2;
  g2.A = 2.0 * g1.A;
  g2.B = 2.0 * g1.B;
  g2.C = 2.0 * g1.C;
  const auto s1 = surrounding_rectangle_spectrum(g1, 400.0);
  const auto s2 = surrounding_rectangle_spectrum(g2, 100.0);
  for (std::size_t i = 0; i < std::min(s1.eigenvalues.size(),
                                       s2.eigenvalues.size());
       ++i)
    REQUIRE(s2.eigenvalues[i] ==
            Catch::Approx(s1.eigenvalues[i] / 4.0).epsilon(1e-14));
}

TEST_CASE("surrounding rectangle: state count grows with cutoff") {
  BoxGeometry g;
  std::size_t prev = 0;
  for (double cutoff : {30.0, 60.0, 120.0, 240.0}) {
    const auto s = surrounding_rectangle_spectrum(g, cutoff);
    REQUIRE(s.eigenvalues.size() >= prev);
    prev = s.eigenvalues.size();
  }
}

TEST_CASE("surrounding rectangle: cutoff below ground state throws") {
  BoxGeometry g;
  REQUIRE_THROWS_AS(surrounding_rectangle_spectrum(g, 1.0), validation_error);
}

TEST_CASE("immersed rectangle: equal thirds gives exactly 9x, index by index") {
  BoxGeometry g;  // defaults are the equal-thirds partition of [-1/2, 1/2]
  const auto surr = surrounding_rectangle_spectrum(g, 60.0);
  const auto imm = immersed_rectangle_spectrum(g, 9.0 * 60.0);
  REQUIRE(surr.eigenvalues.size() == imm.eigenvalues.size());
  for (std::size_t i = 0; i < surr.eigenvalues.size(); ++i)
    REQUIRE(imm.eigenvalues[i] / surr.eigenvalues[i] ==
            Catch::Approx(9.0).epsilon(1e-13));
  // degenerate levels may order their labels differently; compare as sets
  auto sl = surr.labels, il = imm.labels;
  std::sort(sl.begin(), sl.end());
  std::sort(il.begin(), il.end());
  REQUIRE(sl == il);
}

TEST_CASE("immersed rectangle: N=1 equal thirds index (1,1,1)") {
  BoxGeometry g;
  const auto imm = immersed_rectangle_spectrum(g, 300.0);
  REQUIRE(imm.eigenvalues[0] ==
          Catch::Approx(9.0 * 3.0 * pi * pi / 2.0).epsilon(1e-13));
}

TEST_CASE("immersed rectangle: shrinking C-B raises heavy-coordinate levels") {
  BoxGeometry wide, narrow;
  narrow.B = -0.05;
  narrow.C = 0.05;
  const auto w = immersed_rectangle_spectrum(wide, 4000.0);
  const auto n = immersed_rectangle_spectrum(narrow, 40000.0);
  // compare the (1,1,1) ground state: the X interval strictly shrank while
  // the light intervals grew, but X dominates at these sizes
  REQUIRE(n.eigenvalues[0] > w.eigenvalues[0]);
}

TEST_CASE("finite-difference solver reproduces a rectangle spectrum") {
  // Dirichlet Laplacian on [0,a]x[0,b]: pi^2 (p^2/a^2 + q^2/b^2)
  const double a = 1.0, b = 2.0;
  const std::size_t n = 40;
  auto inside = [](std::size_t, std::size_t) { return true; };
  std::vector<double> coarse, fine;
  for (int r = 1; r <= 2; ++r) {
    const auto A = detail::fd_dirichlet_laplacian(
        n * r, 2 * n * r, a / (n * r), b / (2 * n * r), inside);
    auto eig = lanczos_smallest(A, 4);
    (r == 1 ? coarse : fine) = eig;
  }
  std::vector<double> exact;
  for (int p = 1; p <= 3; ++p)
    for (int q = 1; q <= 6; ++q)
      exact.push_back(pi * pi * (p * p / (a * a) + q * q / (b * b)));
  std::sort(exact.begin(), exact.end());
  for (std::size_t i = 0; i < 4; ++i) {
    const double rich = (4.0 * fine[i] - coarse[i]) / 3.0;
    const double indicator = std::abs(fine[i] - coarse[i]) / 3.0;
    REQUIRE(std::abs(rich - exact[i]) < indicator + 1e-6 * exact[i]);
  }
}

TEST_CASE("triangle eigs: isoceles right triangle ground state is 5 pi^2") {
  TriangleGrid grid{1.0, 1.0, 40};
  const auto res = triangle_dirichlet_eigs(grid, 3);
  // analytic oracle: antisymmetrized square modes pi^2 (p^2 + q^2), p != q
  REQUIRE(std::abs(res.spectrum.eigenvalues[0] - 5.0 * pi * pi) <
          0.005 * 5.0 * pi * pi);
  REQUIRE(std::abs(res.spectrum.eigenvalues[1] - 10.0 * pi * pi) <
          0.01 * 10.0 * pi * pi);
}

TEST_CASE("triangle eigs: halving h stays within the error indicator") {
  TriangleGrid coarse{1.0, 1.0, 24}, fine{1.0, 1.0, 48};
  const auto rc = triangle_dirichlet_eigs(coarse, 2);
  const auto rf = triangle_dirichlet_eigs(fine, 2);
  for (std::size_t i = 0; i < 2; ++i)
    REQUIRE(std::abs(rf.spectrum.eigenvalues[i] - rc.spectrum.eigenvalues[i]) <
            rc.error_indicator[i] + 1e-9 * rc.spectrum.eigenvalues[i]);
}

TEST_CASE("triangle eigs: sandwiched by the rectangle bounds") {
  BoxGeometry geom;
  geom.n_right = 1;
  geom.n_left = 0;
  const auto surr = surrounding_rectangle_spectrum(geom, 200.0);
  const auto imm = immersed_rectangle_spectrum(geom, 1800.0);
  const auto grid =
      TriangleGrid::from_masses(geom.m, geom.M, geom.A, geom.hbar, 32);
  const auto tri = triangle_dirichlet_eigs(grid, 5);
  for (std::size_t i = 0; i < 5; ++i) {
    REQUIRE(surr.eigenvalues[i] <=
            tri.spectrum.eigenvalues[i] + tri.error_indicator[i]);
    REQUIRE(tri.spectrum.eigenvalues[i] <=
            imm.eigenvalues[i] + tri.error_indicator[i]);
  }
}

TEST_CASE("lanczos: solver-error on impossible budget") {
  const auto A = detail::fd_dirichlet_laplacian(
      40, 40, 1.0 / 40, 1.0 / 40,
      [](std::size_t, std::size_t) { return true; });
  REQUIRE_THROWS_AS(lanczos_smallest(A, 30, 3, 1e-14), solver_error);
}

TEST_CASE("inverse_square_sum: Basel for N=1") {
  // the stall tolerance needs the tail term 1/K^2 below ~1e-9 of the sum
  const auto rep = inverse_square_sum(1, 50000);
  REQUIRE(std::abs(rep.partial_sums.back() - pi * pi / 6.0) < 1e-3);
  REQUIRE_FALSE(rep.divergent);
}

TEST_CASE("inverse_square_sum: N=2 grows like ln K") {
  const auto rep = inverse_square_sum(2, 600);
  REQUIRE(rep.fit_slope > 0.0);
  REQUIRE(rep.fit_r2 > 0.999);
  REQUIRE(rep.divergent);
  REQUIRE(rep.fit_model.find("ln K") != std::string::npos);
}

TEST_CASE("inverse_square_sum: N=3 grows like a power law") {
  const auto rep = inverse_square_sum(3, 120);
  REQUIRE(rep.divergent);
  // S(K) ~ c K for N=3 (integral of r^2/r^2)
  REQUIRE(rep.fit_slope == Catch::Approx(1.0).margin(0.1));
}

TEST_CASE("inverse_square_sum: shell decomposition matches brute force") {
  // oracle: direct loop over the full cube for a small budget
  const std::size_t K = 20;
  double brute = 0.0;
  for (std::size_t i = 1; i <= K; ++i)
    for (std::size_t j = 1; j <= K; ++j)
      brute += 1.0 / (static_cast<double>(i) * i + static_cast<double>(j) * j);
  const auto rep = inverse_square_sum(2, 100);
  REQUIRE(rep.cube_sides[K - 1] == K);
  REQUIRE(rep.partial_sums[K - 1] == Catch::Approx(brute).epsilon(1e-12));
}

TEST_CASE("inverse_spectrum_sum: box spectrum converges at budget") {
  SpectrumModel sm;
  for (std::size_t k = 1; k <= 40000; ++k)
    sm.eigenvalues.push_back(0.5 * pi * pi * static_cast<double>(k) * k);
  sm.source = "analytic-rectangle";
  const auto rep = inverse_spectrum_sum(sm);
  REQUIRE(rep.convergent_at_budget);
  // Basel oracle: sum 1/zeta = (2/pi^2) * pi^2/6 = 1/3
  REQUIRE(rep.partial_sums.back() == Catch::Approx(1.0 / 3.0).margin(1e-4));
}

TEST_CASE("inverse_spectrum_sum: linear spectrum does not converge at budget") {
  SpectrumModel sm;
  for (std::size_t k = 1; k <= 20000; ++k)
    sm.eigenvalues.push_back(static_cast<double>(k));
  sm.source = "analytic-rectangle";
  const auto rep = inverse_spectrum_sum(sm);
  REQUIRE_FALSE(rep.convergent_at_budget);
}
