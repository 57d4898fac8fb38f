// qplab: command-line laboratory for quasi-periodic signals, random-series
// Brownian motion, Dirichlet spectra, Gibbs coefficient ensembles, and
// finite-mode quantum dynamics.
//
// Exit codes: 0 success, 1 acceptance-criterion failure, 2 usage/config/IO
// error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qplab/acceptance.hpp"
#include "qplab/classical.hpp"
#include "qplab/diagnostics.hpp"
#include "qplab/ensembles.hpp"
#include "qplab/io.hpp"
#include "qplab/quantum.hpp"
#include "qplab/signals.hpp"
#include "qplab/spectra.hpp"
#include "qplab/triangle.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

struct GlobalOpts {
  std::uint64_t seed = kDefaultSeed;
  fs::path out = "out";
  fs::path config;
  std::string only;
  json cfg;  // parsed config, or empty object

  json section(const std::string& cmd,
               const std::vector<std::string>& allowed) const {
    if (!cfg.contains(cmd)) return json::object();
    const json& s = cfg.at(cmd);
    if (!s.is_object())
      throw qplab::validation_error("config section '" + cmd +
                                    "' must be an object");
    qplab::require_keys_subset(s, allowed, "section '" + cmd + "'");
    return s;
  }
};

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

std::vector<double> logspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = a * std::pow(b / a, static_cast<double>(i) /
                                   static_cast<double>(n - 1));
  return v;
}

void ensure_out(const fs::path& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw qplab::io_error("cannot create output directory " +
                                out.string() + ": " + ec.message());
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw qplab::io_error("cannot open for writing: " + path.string());
  f << j.dump(2) << '\n';
}

// --- subcommands ---------------------------------------------------------

int cmd_fig1(const GlobalOpts& g) {
  const json s = g.section("fig1", {"gamma", "n_terms", "grid_points"});
  const double gamma = s.value("gamma", 10.0);
  const std::size_t n_terms = s.value("n_terms", std::size_t{1000});
  const std::size_t grid_points = s.value("grid_points", std::size_t{512});
  ensure_out(g.out);

  qplab::OUParams params;
  params.gamma = gamma;
  params.n_terms = n_terms;
  const auto times = linspace(0.0, 1.0, grid_points);

  json manifest;
  manifest["command"] = "fig1";
  manifest["gamma"] = gamma;
  manifest["n_terms"] = n_terms;
  manifest["grid_points"] = grid_points;
  manifest["seeds"] = json::array();

  std::vector<qplab::Trajectory> curves;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto draw = qplab::draw_coefficients(
        n_terms, seed, qplab::CoefDistribution::Gaussian);
    auto traj = qplab::ou_series_sample(params, draw, times);
    traj.meta.seed = seed;
    const fs::path csv = g.out / ("fig1_seed" + std::to_string(seed) + ".csv");
    qplab::write_trajectory_csv(csv, traj);
    qplab::write_trajectory_meta(
        g.out / ("fig1_seed" + std::to_string(seed) + ".meta.json"),
        traj.meta);
    manifest["seeds"].push_back(seed);
    manifest["files"].push_back(csv.filename().string());
    curves.push_back(std::move(traj));
  }

  // gnuplot-friendly combined table: t followed by one column per seed
  const fs::path combined = g.out / "fig1_combined.dat";
  std::ofstream f(combined, std::ios::binary);
  if (!f) throw qplab::io_error("cannot open " + combined.string());
  f << "# t";
  for (std::uint64_t seed = 1; seed <= 5; ++seed) f << " seed" << seed;
  f << '\n';
  for (std::size_t i = 0; i < times.size(); ++i) {
    f << qplab::format_double(times[i]);
    for (const auto& c : curves) f << ' ' << qplab::format_double(c.values[i]);
    f << '\n';
  }
  manifest["combined"] = combined.filename().string();
  write_json(g.out / "fig1_manifest.json", manifest);
  std::cout << "fig1: wrote 5 trajectories to " << g.out << "\n";
  return 0;
}

int cmd_wiener(const GlobalOpts& g) {
  const json s = g.section("wiener", {"n_terms", "grid_points"});
  const std::size_t n_terms = s.value("n_terms", std::size_t{1000});
  const std::size_t grid_points = s.value("grid_points", std::size_t{512});
  ensure_out(g.out);
  const auto draw = qplab::draw_coefficients(
      n_terms, g.seed, qplab::CoefDistribution::Gaussian);
  const auto traj =
      qplab::wiener_series_sample(draw, linspace(0.0, 1.0, grid_points));
  qplab::write_trajectory_csv(g.out / "wiener.csv", traj);
  qplab::write_trajectory_meta(g.out / "wiener.meta.json", traj.meta);
  std::cout << "wiener: wrote " << (g.out / "wiener.csv") << "\n";
  return 0;
}

int cmd_ou(const GlobalOpts& g) {
  const json s = g.section("ou", {"gamma", "n_terms", "grid_points"});
  qplab::OUParams params;
  params.gamma = s.value("gamma", 10.0);
  params.n_terms = s.value("n_terms", std::size_t{1000});
  params.seed = g.seed;
  const std::size_t grid_points = s.value("grid_points", std::size_t{512});
  ensure_out(g.out);
  const auto draw = qplab::draw_coefficients(
      params.n_terms, g.seed, qplab::CoefDistribution::Gaussian);
  const auto traj =
      qplab::ou_series_sample(params, draw, linspace(0.0, 1.0, grid_points));
  qplab::write_trajectory_csv(g.out / "ou.csv", traj);
  qplab::write_trajectory_meta(g.out / "ou.meta.json", traj.meta);
  std::cout << "ou: wrote " << (g.out / "ou.csv") << "\n";
  return 0;
}

int cmd_ou_msd(const GlobalOpts& g) {
  const json s =
      g.section("ou-msd", {"gamma", "n_terms", "n_paths", "grid_points"});
  const double gamma = s.value("gamma", 10.0);
  const std::size_t n_terms = s.value("n_terms", std::size_t{1000});
  const std::size_t n_paths = s.value("n_paths", std::size_t{2000});
  const std::size_t grid_points = s.value("grid_points", std::size_t{33});
  ensure_out(g.out);

  auto times = linspace(0.0, 1.0, grid_points);
  times.erase(times.begin());  // MSD at t=0 is identically 0
  // the exact-kernel sampler integrates position by trapezoid, so march it
  // on a refined grid and probe at the output times
  const std::size_t refine = 32;
  const auto fine =
      linspace(0.0, 1.0, (grid_points - 1) * refine + 1);

  qplab::OUParams params;
  params.gamma = gamma;
  params.n_terms = n_terms;
  std::vector<qplab::KahanSum> series_sum(times.size());
  std::vector<qplab::KahanSum> exact_sum(times.size()), exact_sum2(times.size());
  for (std::size_t p = 0; p < n_paths; ++p) {
    const auto draw = qplab::draw_coefficients(
        n_terms, g.seed, qplab::CoefDistribution::Gaussian, p);
    const auto st = qplab::ou_series_sample(params, draw, times);
    const auto ex = qplab::ou_exact_sample(gamma, fine, g.seed + 1, p);
    for (std::size_t i = 0; i < times.size(); ++i) {
      series_sum[i].add(st.values[i] * st.values[i]);
      const double x = ex.position.values[(i + 1) * refine];
      const double d2 = x * x;
      exact_sum[i].add(d2);
      exact_sum2[i].add(d2 * d2);
    }
  }

  const fs::path csv = g.out / "ou_msd.csv";
  std::ofstream f(csv, std::ios::binary);
  if (!f) throw qplab::io_error("cannot open " + csv.string());
  f << "t,msd_analytic,msd_series_mc,msd_exact_mc,stderr\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double me = exact_sum[i].value() / n_paths;
    const double var =
        std::max(0.0, exact_sum2[i].value() / n_paths - me * me);
    f << qplab::format_double(times[i]) << ','
      << qplab::format_double(qplab::ou_msd_analytic(gamma, times[i])) << ','
      << qplab::format_double(series_sum[i].value() / n_paths) << ','
      << qplab::format_double(me) << ','
      << qplab::format_double(std::sqrt(var / n_paths)) << '\n';
  }
  std::cout << "ou-msd: wrote " << csv << "\n";
  return 0;
}

void write_spectrum_csv(const fs::path& path,
                        const std::vector<const qplab::SpectrumModel*>& specs) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw qplab::io_error("cannot open " + path.string());
  f << "index_label,eigenvalue,source\n";
  for (const auto* s : specs)
    for (std::size_t i = 0; i < s->eigenvalues.size(); ++i)
      f << (s->labels.empty() ? "#" + std::to_string(i + 1) : s->labels[i])
        << ',' << qplab::format_double(s->eigenvalues[i]) << ',' << s->source
        << '\n';
}

int cmd_spectrum_bounds(const GlobalOpts& g) {
  const json s = g.section("spectrum-bounds",
                           {"cutoff", "n_right", "n_left", "mass_ratio"});
  qplab::BoxGeometry geom;
  geom.n_right = s.value("n_right", std::size_t{1});
  geom.n_left = s.value("n_left", std::size_t{0});
  geom.M = s.value("mass_ratio", 1.0) * geom.m;
  const double cutoff = s.value("cutoff", 200.0);
  ensure_out(g.out);
  const auto surr = qplab::surrounding_rectangle_spectrum(geom, cutoff);
  const auto imm = qplab::immersed_rectangle_spectrum(geom, 9.0 * cutoff);
  write_spectrum_csv(g.out / "spectrum_bounds.csv", {&surr, &imm});
  std::cout << "spectrum-bounds: wrote " << (g.out / "spectrum_bounds.csv")
            << " (" << surr.eigenvalues.size() << " surrounding, "
            << imm.eigenvalues.size() << " immersed)\n";
  return 0;
}

int cmd_triangle_eig(const GlobalOpts& g) {
  const json s = g.section(
      "triangle-eig", {"mass_ratio", "cells", "k", "budget", "residual_tol"});
  const double mass_ratio = s.value("mass_ratio", 1.0);
  const std::size_t cells = s.value("cells", std::size_t{48});
  const std::size_t k = s.value("k", std::size_t{5});
  const std::size_t budget = s.value("budget", std::size_t{10000});
  const double tol = s.value("residual_tol", 1e-8);
  ensure_out(g.out);
  const auto grid =
      qplab::TriangleGrid::from_masses(1.0, mass_ratio, 0.5, 1.0, cells);
  const auto res = qplab::triangle_dirichlet_eigs(grid, k, budget, tol);

  const fs::path csv = g.out / "triangle_eig.csv";
  std::ofstream f(csv, std::ios::binary);
  if (!f) throw qplab::io_error("cannot open " + csv.string());
  f << "index,coarse,fine,extrapolated,error_indicator\n";
  for (std::size_t i = 0; i < k; ++i)
    f << (i + 1) << ',' << qplab::format_double(res.coarse[i]) << ','
      << qplab::format_double(res.fine[i]) << ','
      << qplab::format_double(res.spectrum.eigenvalues[i]) << ','
      << qplab::format_double(res.error_indicator[i]) << '\n';
  std::cout << "triangle-eig: wrote " << csv << " (h=" << res.h << ")\n";
  return 0;
}

int cmd_inverse_sum(const GlobalOpts& g) {
  const json s = g.section("inverse-sum", {"dimensions", "budget"});
  const std::size_t N = s.value("dimensions", std::size_t{2});
  const std::size_t budget = s.value("budget", std::size_t{600});
  ensure_out(g.out);
  const auto rep = qplab::inverse_square_sum(N, budget);
  json j;
  j["dimensions"] = N;
  j["budget"] = rep.budget;
  j["divergent"] = rep.divergent;
  j["fit_model"] = rep.fit_model;
  j["fit_intercept"] = rep.fit_intercept;
  j["fit_slope"] = rep.fit_slope;
  j["fit_r2"] = rep.fit_r2;
  write_json(g.out / "inverse_sum.json", j);

  const fs::path csv = g.out / "inverse_sum.csv";
  std::ofstream f(csv, std::ios::binary);
  if (!f) throw qplab::io_error("cannot open " + csv.string());
  f << "cube_side,partial_sum\n";
  for (std::size_t i = 0; i < rep.cube_sides.size(); ++i)
    f << rep.cube_sides[i] << ','
      << qplab::format_double(rep.partial_sums[i]) << '\n';
  std::cout << "inverse-sum: N=" << N << " "
            << (rep.divergent ? "divergent" : "not divergent at this budget")
            << ", wrote " << csv << "\n";
  return 0;
}

int cmd_gibbs_msd(const GlobalOpts& g) {
  const json s = g.section(
      "gibbs-msd", {"n_modes", "beta", "e_max", "n_samples", "grid_points"});
  const std::size_t n_modes = s.value("n_modes", std::size_t{8});
  qplab::GibbsEnsembleSpec spec;
  spec.zeta = qplab::box_spectrum(n_modes, 0.5);
  spec.beta = s.value("beta", 0.02);
  spec.e_max = s.value("e_max", 100.0);
  spec.seed = g.seed;
  const std::size_t n_samples = s.value("n_samples", std::size_t{5000});
  const std::size_t grid_points = s.value("grid_points", std::size_t{96});
  ensure_out(g.out);

  const auto run = qplab::gibbs_sample(spec, n_samples);
  const auto rep = qplab::coefficient_moments(run.samples);
  const auto gmat = qplab::box_position_matrix(n_modes, 0.5);

  json mj;
  mj["n_modes"] = n_modes;
  mj["beta"] = spec.beta;
  mj["e_max"] = spec.e_max;
  mj["n_samples"] = n_samples;
  mj["acceptance_rate"] = run.acceptance_rate;
  mj["effective_sample_size"] = run.effective_sample_size;
  if (!run.quality_warning.empty()) mj["quality_warning"] = run.quality_warning;
  for (std::size_t k = 0; k < n_modes; ++k)
    mj["mean_abs2"].push_back(rep.cross(k, k).real());
  write_json(g.out / "gibbs_moments.json", mj);

  const auto times =
      logspace(1e-4 / spec.zeta.back(), 10.0 / spec.zeta.front(), grid_points);
  const auto msd = qplab::msd_curve(spec.zeta, gmat, rep.abs2_pair, times);
  qplab::write_trajectory_csv(g.out / "gibbs_msd.csv", msd);

  json wj;
  const auto win = qplab::diffusive_window_detect(msd, 0.1);
  wj["diffusive_window_found"] = win.has_value();
  if (win) {
    wj["first_index"] = win->first;
    wj["last_index"] = win->last;
    wj["slope"] = win->slope;
    wj["diffusion_constant"] = win->diffusion_constant;
    wj["r2"] = win->r2;
  }
  write_json(g.out / "gibbs_msd_window.json", wj);
  std::cout << "gibbs-msd: ess=" << run.effective_sample_size << ", wrote "
            << (g.out / "gibbs_msd.csv") << "\n";
  return 0;
}

int cmd_nbml(const GlobalOpts& g) {
  const json s = g.section("nbml", {"n_modes", "e_max"});
  const std::size_t n_modes = s.value("n_modes", std::size_t{64});
  ensure_out(g.out);
  qplab::SpectrumModel sm;
  sm.eigenvalues = qplab::box_spectrum(n_modes, 0.5);
  sm.source = "analytic-rectangle";
  const double e_max = s.value("e_max", sm.eigenvalues.back());
  const auto gmat = qplab::box_position_matrix(n_modes, 0.5);
  const auto B = qplab::build_B_matrix(gmat, sm);
  const auto rep = qplab::nbml_criteria(B, sm, e_max);

  json j;
  j["budget"] = rep.budget;
  j["theorem_stalled"] = rep.theorem_stalled;
  j["corollary_stalled"] = rep.corollary_stalled;
  j["bound_constant"] = rep.bound_constant;
  j["max_abs_b_capped"] = rep.max_abs_b_capped;
  j["bound_holds"] = rep.bound_holds;
  j["note"] =
      "stall verdicts are heuristics at the stated budget, not proofs";
  for (std::size_t i = 0; i < rep.term_counts.size(); ++i) {
    j["table"].push_back({{"terms", rep.term_counts[i]},
                          {"theorem_sum", rep.theorem_sums[i]},
                          {"corollary_sum", rep.corollary_sums[i]}});
  }
  write_json(g.out / "nbml_report.json", j);
  std::cout << "nbml: wrote " << (g.out / "nbml_report.json") << "\n";
  return 0;
}

int cmd_zeno(const GlobalOpts& g) {
  const json s = g.section("zeno", {"dim", "total_time"});
  const std::size_t dim = s.value("dim", std::size_t{6});
  const double total_time = s.value("total_time", 1.0);
  ensure_out(g.out);

  qplab::CounterRng rng(g.seed, 0);
  qplab::ModeSystem sys;
  sys.H = qplab::acceptance::detail::random_hermitian(dim, rng, 1.0);
  sys.X = Eigen::MatrixXcd::Identity(dim, dim);
  sys.S = Eigen::MatrixXcd::Identity(dim, dim);
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(dim, dim);
  const std::size_t half = dim / 2;
  for (std::size_t i = 0; i < half; ++i) P(i, i) = 1.0;
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(dim);
  for (std::size_t i = 0; i < half; ++i)
    psi0[i] = std::complex<double>(rng.normal(), rng.normal());
  psi0 /= psi0.norm();

  const auto res =
      qplab::zeno_survival(sys, psi0, P, total_time, {1, 10, 100});
  const fs::path csv = g.out / "zeno_survival.csv";
  std::ofstream f(csv, std::ios::binary);
  if (!f) throw qplab::io_error("cannot open " + csv.string());
  f << "dt,survival\n";
  for (std::size_t i = 0; i < res.dts.size(); ++i)
    f << qplab::format_double(res.dts[i]) << ','
      << qplab::format_double(res.survivals[i]) << '\n';
  json j;
  j["fitted_exponent"] = res.fitted_exponent;
  for (std::size_t i = 0; i < res.peek_counts.size(); ++i)
    j["peeks"].push_back({{"n", res.peek_counts[i]},
                          {"survival", res.peek_survivals[i]}});
  write_json(g.out / "zeno_report.json", j);
  std::cout << "zeno: exponent " << res.fitted_exponent << ", wrote " << csv
            << "\n";
  return 0;
}

int cmd_wfe(const GlobalOpts& g) {
  const json s = g.section("wfe", {"dim", "w", "particles", "dt", "steps"});
  const std::size_t dim = s.value("dim", std::size_t{8});
  qplab::WFEParams params;
  params.w = s.value("w", 1.0);
  params.N = s.value("particles", std::size_t{2});
  const double dt = s.value("dt", 0.005);
  const std::size_t steps = s.value("steps", std::size_t{1000});
  ensure_out(g.out);

  qplab::CounterRng rng(g.seed, 0);
  qplab::ModeSystem sys = qplab::acceptance::detail::wfe_demo_system(dim, rng);
  const auto psi0 = qplab::acceptance::detail::random_state(dim, rng);
  const auto run = qplab::evolve_wfe(sys, params, psi0, dt, steps);
  const auto xt = qplab::observable_trajectory(run.states, run.times, sys.X);
  qplab::write_trajectory_csv(g.out / "wfe_x.csv", xt);

  json j;
  j["w"] = params.w;
  j["particles"] = params.N;
  j["dt"] = dt;
  j["steps"] = steps;
  j["norm_drift"] = run.norm_drift;
  j["energy_drift"] = run.energy_drift;
  const auto vel = qplab::initial_velocity_check(sys, params, psi0);
  j["initial_velocity"] = {{"numeric", vel.numeric_derivative},
                           {"commutator", vel.commutator_derivative},
                           {"wfe_term", vel.wfe_term_expectation},
                           {"discrepancy", vel.discrepancy}};
  write_json(g.out / "wfe_report.json", j);
  std::cout << "wfe: norm drift " << run.norm_drift << ", wrote "
            << (g.out / "wfe_x.csv") << "\n";
  return 0;
}

int cmd_suite(const GlobalOpts& g) {
  ensure_out(g.out);
  const auto results = qplab::acceptance::run_suite(g.only);
  json j;
  bool all = true;
  for (const auto& r : results) {
    std::printf("%s criterion %2d [%s] %s (%.1f s)%s%s\n",
                r.passed ? "PASS" : "FAIL", r.id, r.tag.c_str(),
                r.name.c_str(), r.seconds, r.detail.empty() ? "" : " - ",
                r.detail.c_str());
    j["criteria"].push_back({{"id", r.id},
                             {"tag", r.tag},
                             {"name", r.name},
                             {"passed", r.passed},
                             {"seconds", r.seconds},
                             {"detail", r.detail}});
    all = all && r.passed;
  }
  j["all_passed"] = all;
  write_json(g.out / "suite_report.json", j);
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qplab: numerical laboratory for quasi-periodic observables, "
               "random-series diffusion, Dirichlet spectra, and wavefunction "
               "ensembles"};
  app.require_subcommand(1);
  app.fallthrough();  // accept the global flags after the subcommand too

  GlobalOpts g;
  if (const char* env = std::getenv("QPLAB_SEED"))
    g.seed = std::strtoull(env, nullptr, 10);
  if (const char* env = std::getenv("QPLAB_OUT")) g.out = env;
  app.add_option("--seed", g.seed,
                 "root RNG seed (env QPLAB_SEED; default 42)");
  app.add_option("--out", g.out,
                 "output directory (env QPLAB_OUT; default ./out)");
  app.add_option("--config", g.config, "JSON config file");
  app.add_option("--only", g.only,
                 "suite filter: module tag or criterion id");

  using Handler = int (*)(const GlobalOpts&);
  std::vector<std::pair<CLI::App*, Handler>> handlers;
  auto add = [&](const char* name, const char* desc, Handler h) {
    handlers.emplace_back(app.add_subcommand(name, desc), h);
  };
  add("fig1", "five random-series diffusion curves plus manifest", cmd_fig1);
  add("wiener", "one Wiener series trajectory", cmd_wiener);
  add("ou", "one Ornstein-Uhlenbeck series trajectory", cmd_ou);
  add("ou-msd", "mean-square displacement table (analytic + Monte Carlo)",
      cmd_ou_msd);
  add("spectrum-bounds", "surrounding and immersed rectangle spectra",
      cmd_spectrum_bounds);
  add("triangle-eig", "triangle Dirichlet eigenvalues with extrapolation",
      cmd_triangle_eig);
  add("inverse-sum", "inverse sum-of-squares partial sums and fit",
      cmd_inverse_sum);
  add("gibbs-msd", "Gibbs coefficient ensemble moments and MSD curve",
      cmd_gibbs_msd);
  add("nbml", "series-criteria report for the box surrogate", cmd_nbml);
  add("zeno", "projective-measurement survival experiment", cmd_zeno);
  add("wfe", "nonlinear wavefunction-energy evolution", cmd_wfe);
  add("suite", "run the full acceptance suite", cmd_suite);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!g.config.empty()) {
      std::ifstream f(g.config, std::ios::binary);
      if (!f)
        throw qplab::io_error("cannot read config: " + g.config.string());
      g.cfg = json::parse(f);
      if (!g.cfg.is_object())
        throw qplab::validation_error("config root must be a JSON object");
      qplab::require_keys_subset(
          g.cfg,
          {"fig1", "wiener", "ou", "ou-msd", "spectrum-bounds", "triangle-eig",
           "inverse-sum", "gibbs-msd", "nbml", "zeno", "wfe", "suite", "seed",
           "out"},
          "config root");
      if (g.cfg.contains("seed")) g.seed = g.cfg["seed"].get<std::uint64_t>();
      if (g.cfg.contains("out") && g.out == "out")
        g.out = g.cfg["out"].get<std::string>();
    }
    for (const auto& [sub, handler] : handlers)
      if (sub->parsed()) return handler(g);
    std::cerr << "no subcommand\n";
    return 2;
  } catch (const qplab::validation_error& e) {
    std::cerr << "config/usage error: " << e.what() << "\n";
    return 2;
  } catch (const qplab::structural_error& e) {
    std::cerr << "config/usage error: " << e.what() << "\n";
    return 2;
  } catch (const qplab::io_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
