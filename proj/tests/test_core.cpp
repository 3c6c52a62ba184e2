#include <doctest.h>

#include <random>

#include "rsot/sinkhorn.hpp"
#include "rsot/solve.hpp"
#include "test_util.hpp"

using namespace rsot;
using namespace rsot::testing;

namespace {

/// The 2-atom / 2-target asymmetric instance used throughout:
/// atoms {0,1} with masses (1/2,1/2), targets {0,1}, nu = (0.75, 0.25).
RandomInstance two_by_two() {
  RandomInstance inst;
  inst.atoms.dim = 1;
  inst.atoms.points = {make_point(0.0), make_point(1.0)};
  inst.atoms.quad_weights = {0.5, 0.5};
  inst.atoms.densities = {1.0, 1.0};
  inst.atoms.masses = {0.5, 0.5};
  inst.target.dim = 1;
  inst.target.points = {make_point(0.0), make_point(1.0)};
  inst.target.weights = {0.75, 0.25};
  inst.psi = {0.0, 0.0};
  return inst;
}

EvalResult eval_untruncated(const RandomInstance& inst,
                            const std::vector<double>& psi, double eps,
                            int workers = 1) {
  SolverConfig cfg;
  cfg.epsilon = eps;
  cfg.workers = workers;
  const SpatialIndex index(inst.target.points);
  TruncationState trunc;
  trunc.set_weight_stats(inst.target.weights);
  return evaluate_dual(inst.atoms, inst.target, DualPotential{psi, Gauge::Raw},
                       cfg, trunc, index);
}

}  // namespace

TEST_CASE("evaluate_dual: single target short-circuits to plain cost") {
  RandomInstance inst;
  inst.atoms = uniform_interval_atoms(8, 1);
  inst.target.dim = 1;
  inst.target.points = {make_point(0.4)};
  inst.target.weights = {1.0};

  double expected = 0.0;
  for (std::size_t q = 0; q < inst.atoms.size(); ++q)
    expected -= cost(CostKind::SqEuclidean, inst.atoms.points[q],
                     inst.target.points[0]) *
                inst.atoms.masses[q];

  for (double shift : {0.0, -3.0, 11.0}) {
    const EvalResult res = eval_untruncated(inst, {shift}, 0.5);
    CHECK(res.J == doctest::Approx(expected).epsilon(1e-12));
    CHECK(res.gradient[0] == doctest::Approx(0.0));
  }
}

TEST_CASE("evaluate_dual: frozen values on the 2x2 asymmetric instance") {
  // Expected values computed by a straight two-loop evaluation of the
  // functional and gradient formulas in an independent script.
  const RandomInstance inst = two_by_two();
  const EvalResult res = eval_untruncated(inst, {0.0, 0.0}, 1.0);
  CHECK(res.J == doctest::Approx(-0.226625130922122).epsilon(1e-12));
  CHECK(res.gradient[0] == doctest::Approx(-0.011418450214431).epsilon(1e-10));
  CHECK(res.gradient[1] == doctest::Approx(+0.011418450214431).epsilon(1e-10));
}

TEST_CASE("evaluate_dual: symmetric instance has zero gradient") {
  RandomInstance inst = two_by_two();
  inst.target.weights = {0.5, 0.5};
  const EvalResult res = eval_untruncated(inst, {0.0, 0.0}, 1.0);
  CHECK(std::abs(res.gradient[0]) <= 1e-15);
  CHECK(std::abs(res.gradient[1]) <= 1e-15);
}

TEST_CASE("evaluate_dual: input validation") {
  const RandomInstance inst = two_by_two();
  CHECK_THROWS_AS(eval_untruncated(inst, {0.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(
      eval_untruncated(inst, {std::nan(""), 0.0}, 1.0),
      std::invalid_argument);
}

TEST_CASE("evaluate_dual: gradient components sum to zero") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const RandomInstance inst = random_instance(rng, 2, 15, 120);
    const EvalResult res = eval_untruncated(inst, inst.psi, 0.3);
    double sum = 0.0;
    for (double g : res.gradient) sum += g;
    CHECK(std::abs(sum) <= 1e-10);
  }
}

TEST_CASE("evaluate_dual: matches central finite differences") {
  std::mt19937_64 rng(29);
  for (double eps : {1.0, 0.1}) {
    const RandomInstance inst = random_instance(rng, 1, 8, 60);
    const EvalResult res = eval_untruncated(inst, inst.psi, eps);
    const std::vector<double> fd =
        fd_gradient(inst.atoms, inst.target, inst.psi, eps,
                    CostKind::SqEuclidean);
    for (std::size_t k = 0; k < fd.size(); ++k) {
      const double rel = std::abs(res.gradient[k] - fd[k]) /
                         std::max(1e-10, std::abs(fd[k]));
      CHECK(rel <= 1e-5);
    }
  }
}

TEST_CASE("evaluate_dual: gauge invariance under constant shifts") {
  std::mt19937_64 rng(31);
  const RandomInstance inst = random_instance(rng, 2, 12, 80);
  const EvalResult base = eval_untruncated(inst, inst.psi, 0.25);
  for (double c : {1.0, -1.0, 100.0, -100.0}) {
    std::vector<double> shifted = inst.psi;
    for (double& v : shifted) v += c;
    const EvalResult res = eval_untruncated(inst, shifted, 0.25);
    CHECK(std::abs(res.J - base.J) <= 1e-10);
    for (std::size_t k = 0; k < res.gradient.size(); ++k)
      CHECK(std::abs(res.gradient[k] - base.gradient[k]) <= 1e-10);
  }
}

TEST_CASE("evaluate_dual: convexity along random segments") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const RandomInstance inst = random_instance(rng, 1, 10, 50);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(inst.target.size()), b(inst.target.size());
    std::normal_distribution<double> gauss(0.0, 0.5);
    for (double& v : a) v = gauss(rng);
    for (double& v : b) v = gauss(rng);
    const double t = unit(rng);
    std::vector<double> mid(inst.target.size());
    for (std::size_t k = 0; k < mid.size(); ++k)
      mid[k] = t * a[k] + (1.0 - t) * b[k];
    const double Ja = eval_untruncated(inst, a, 0.2).J;
    const double Jb = eval_untruncated(inst, b, 0.2).J;
    const double Jm = eval_untruncated(inst, mid, 0.2).J;
    CHECK(Jm <= t * Ja + (1.0 - t) * Jb + 1e-10);
  }
}

TEST_CASE("evaluate_dual: bitwise reproducible per worker count, stable across") {
  std::mt19937_64 rng(41);
  const RandomInstance inst = random_instance(rng, 2, 30, 500);
  const EvalResult a1 = eval_untruncated(inst, inst.psi, 0.1, 3);
  const EvalResult a2 = eval_untruncated(inst, inst.psi, 0.1, 3);
  CHECK(a1.J == a2.J);
  CHECK(a1.gradient == a2.gradient);

  const EvalResult b = eval_untruncated(inst, inst.psi, 0.1, 1);
  CHECK(std::abs(a1.J - b.J) <= 1e-12 * std::abs(b.J));
  for (std::size_t k = 0; k < b.gradient.size(); ++k)
    CHECK(std::abs(a1.gradient[k] - b.gradient[k]) <= 1e-12);
}

TEST_CASE("cutoffs: frozen hand-evaluated examples") {
  TruncationState t;
  t.psi_max = 0.0;
  t.psi_min = 0.0;
  t.psi_range = 0.0;
  t.nu_max = 1.0;
  t.nu_min = 0.5;
  t.covering = 0.0;
  CHECK(cutoff_pointwise(t, 0.01, 1e-12) ==
        doctest::Approx(0.276310211159286).epsilon(1e-12));
  CHECK(cutoff_pointwise(t, 0.01, 1.0) == doctest::Approx(0.0));
  // eps -> 0 collapses the cutoff to M
  t.psi_max = 0.7;
  CHECK(cutoff_pointwise(t, 1e-15, 1e-12) == doctest::Approx(0.7));
  t.psi_max = 0.0;

  t.cached_D = 1.0;
  t.cached_absJ = 1.0;
  t.has_cache = true;
  CHECK(cutoff_integrated(t, 0.01, 1e-4) ==
        doctest::Approx(0.046051701859881).epsilon(1e-12));
  // argument of the log equal to one: C = M, floored at C0
  t.cached_D = 1e-4 / 0.01;
  CHECK(cutoff_integrated(t, 0.01, 1e-4) == doctest::Approx(0.0));
  t.covering = 0.3;
  CHECK(cutoff_integrated(t, 0.01, 1e-4) == doctest::Approx(0.3));
  t.covering = 0.0;
  t.cached_D = 1.0;
  // monotone decreasing in tau
  CHECK(cutoff_integrated(t, 0.01, 1e-3) < cutoff_integrated(t, 0.01, 1e-4));

  t.covering = 1.0;
  CHECK(cutoff_geometric(t, 0.01, 1e-4) ==
        doctest::Approx(1.052983173665480).epsilon(1e-12));
  // additive in the potential range
  t.psi_range = 0.25;
  CHECK(cutoff_geometric(t, 0.01, 1e-4) ==
        doctest::Approx(1.302983173665480).epsilon(1e-12));
  t.psi_range = 0.0;
  // clamp at C0 when the formula dips below it
  t.cached_absJ = 1e20;
  CHECK(cutoff_geometric(t, 0.01, 1e-4) == doctest::Approx(1.0));

  t.cached_absJ = 0.0;
  CHECK_THROWS_WITH_AS(cutoff_integrated(t, 0.01, 1e-4),
                       doctest::Contains("degenerate"), std::runtime_error);
  CHECK_THROWS_AS(cutoff_geometric(t, 0.01, 1e-4), std::runtime_error);
}

TEST_CASE("truncation: geometric cutoff keeps the relative error below tau") {
  std::mt19937_64 rng(43);
  for (double eps : {0.1, 0.01}) {
    for (double tau : {1e-4, 1e-5}) {
      const RandomInstance inst = random_instance(rng, 2, 200, 2000, 0.05);
      SolverConfig cfg;
      cfg.epsilon = eps;
      cfg.tau = tau;
      cfg.truncation = TruncationKind::Geometric;
      const SpatialIndex index(inst.target.points);

      TruncationState trunc;
      trunc.set_weight_stats(inst.target.weights);
      trunc.covering = covering_cost(inst.atoms, inst.target, cfg.cost_kind);
      trunc.set_psi_stats(inst.psi);
      trunc.cutoff = std::numeric_limits<double>::infinity();
      const EvalResult full = evaluate_dual(
          inst.atoms, inst.target, DualPotential{inst.psi, Gauge::Raw}, cfg,
          trunc, index);

      trunc.cached_absJ = std::abs(full.J);
      trunc.cached_D = full.D;
      trunc.has_cache = true;
      trunc.cutoff = cutoff_geometric(trunc, eps, tau);
      const EvalResult truncated = evaluate_dual(
          inst.atoms, inst.target, DualPotential{inst.psi, Gauge::Raw}, cfg,
          trunc, index);

      CHECK(truncated.candidate_pairs <= full.candidate_pairs);
      CHECK(std::abs(truncated.J - full.J) / std::abs(full.J) <= tau);
    }
  }
}

TEST_CASE("epsilon_schedule: spec examples") {
  const auto s1 = epsilon_schedule(1e-6, 2);
  REQUIRE(s1.size() == 3);
  CHECK(s1[0] == doctest::Approx(1e-4));
  CHECK(s1[1] == doctest::Approx(1e-5));
  CHECK(s1[2] == doctest::Approx(1e-6));
  CHECK(epsilon_schedule(1e-2, 0) == std::vector<double>{1e-2});
  const auto s3 = epsilon_schedule(1.0, 3);
  CHECK(s3 == std::vector<double>{1000.0, 100.0, 10.0, 1.0});
}

TEST_CASE("lbfgs: single-target problem converges at iteration zero") {
  RandomInstance inst;
  inst.atoms = uniform_interval_atoms(8, 1);
  inst.target.dim = 1;
  inst.target.points = {make_point(0.5)};
  inst.target.weights = {1.0};
  SolverConfig cfg;
  cfg.epsilon = 0.1;
  std::vector<double> psi = {0.4};
  const StageReport rep = solve_single(inst.atoms, inst.target, cfg, psi);
  CHECK(rep.status == SolveStatus::Converged);
  CHECK(rep.iterations == 0);
}

TEST_CASE("lbfgs: 1D asymmetric instance reaches the monotone-cell potential") {
  const SourceAtoms atoms = uniform_interval_atoms(256, 2);  // 512 atoms
  const TargetMeasure target = asymmetric_1d_target();
  SolverConfig cfg;
  cfg.epsilon = 1e-3;
  cfg.delta_tol = 1e-9;
  cfg.max_iterations = 500;
  std::vector<double> psi(2, 0.0);
  const StageReport rep = solve_single(atoms, target, cfg, psi);
  CHECK(rep.status == SolveStatus::Converged);
  // analytic boundary b = 1/4: psi2 - psi1 = c(b,y2) - c(b,y1) = 0.15
  CHECK(std::abs((psi[1] - psi[0]) - 0.15) <= 5e-3);
  // the stop rule is the L1 marginal error
  CHECK(rep.final_grad_l1 <= cfg.delta_tol);
}

TEST_CASE("lbfgs: symmetric instance gives equal potentials") {
  const SourceAtoms atoms = uniform_interval_atoms(256, 2);
  const TargetMeasure target = symmetric_1d_target();
  SolverConfig cfg;
  cfg.epsilon = 1e-3;
  cfg.delta_tol = 1e-10;
  cfg.max_iterations = 500;
  std::vector<double> psi(2, 0.0);
  solve_single(atoms, target, cfg, psi);
  CHECK(std::abs(psi[1] - psi[0]) <= 1e-6);
}

TEST_CASE("lbfgs: truncated solves converge with all three cutoff kinds") {
  std::mt19937_64 rng(47);
  const RandomInstance inst = random_instance(rng, 2, 40, 400, 0.0);
  for (TruncationKind kind :
       {TruncationKind::Pointwise, TruncationKind::Integrated,
        TruncationKind::Geometric}) {
    SolverConfig cfg;
    cfg.epsilon = 0.01;
    cfg.delta_tol = 1e-6;
    cfg.truncation = kind;
    cfg.max_iterations = 400;
    std::vector<double> psi(inst.target.size(), 0.0);
    const StageReport rep = solve_single(inst.atoms, inst.target, cfg, psi);
    CHECK(rep.status == SolveStatus::Converged);
    CHECK(rep.final_grad_l1 <= cfg.delta_tol);
    CHECK_FALSE(rep.cutoff_history.empty());
  }
}

TEST_CASE("solve: no scaling equals a single stage") {
  const SourceAtoms atoms = uniform_interval_atoms(64, 2);
  const TargetMeasure target = asymmetric_1d_target();
  SolverConfig cfg;
  cfg.epsilon = 1e-2;
  cfg.delta_tol = 1e-8;

  auto [psi_a, rep_a] = solve(atoms, target, cfg);
  std::vector<double> psi_b(2, 0.0);
  const StageReport rep_b = solve_single(atoms, target, cfg, psi_b);
  REQUIRE(rep_a.stages.size() == 1);
  CHECK(rep_a.stages[0].iterations == rep_b.iterations);
  CHECK(psi_a.values == psi_b);
}

TEST_CASE("solve: warm start from the optimum finishes in two iterations") {
  const SourceAtoms atoms = uniform_interval_atoms(64, 2);
  const TargetMeasure target = asymmetric_1d_target();
  SolverConfig cfg;
  cfg.epsilon = 1e-2;
  cfg.delta_tol = 1e-8;
  auto [psi_star, rep] = solve(atoms, target, cfg);
  REQUIRE(rep.converged);
  auto [psi_again, rep2] = solve(atoms, target, cfg, psi_star);
  CHECK(rep2.stages[0].iterations <= 2);
}

TEST_CASE("solve: epsilon scaling matches the direct solve and saves iterations") {
  const SourceAtoms atoms = uniform_interval_atoms(512, 2);  // 1024 atoms
  const TargetMeasure target = asymmetric_1d_target();
  SolverConfig direct;
  direct.epsilon = 1e-4;
  direct.delta_tol = 1e-6;
  direct.max_iterations = 4000;
  auto [psi_direct, rep_direct] = solve(atoms, target, direct);
  REQUIRE(rep_direct.converged);

  SolverConfig scaled = direct;
  scaled.scaling_steps = 1;
  auto [psi_scaled, rep_scaled] = solve(atoms, target, scaled);
  REQUIRE(rep_scaled.converged);

  const DualPotential a = gauge_fixed(psi_direct, target.weights);
  const DualPotential b = gauge_fixed(psi_scaled, target.weights);
  CHECK(linf_diff(a.values, b.values) <= 10.0 * direct.delta_tol);
  CHECK(rep_scaled.stages.back().iterations <
        rep_direct.stages.back().iterations);
}

TEST_CASE("softmax_refine: identity cases") {
  // Single coarse target equal to the fine point: psi comes back unchanged.
  const SourceAtoms atoms = uniform_interval_atoms(16, 1);
  TargetMeasure coarse;
  coarse.dim = 1;
  coarse.points = {make_point(0.3)};
  coarse.weights = {1.0};
  const std::vector<double> psi = {0.8};
  const auto refined = softmax_refine(coarse, psi, coarse.points, atoms, 0.05,
                                      CostKind::SqEuclidean);
  CHECK(refined[0] == doctest::Approx(0.8).epsilon(1e-10));

  // One atom: psi_init_k = psi_j + c(x0,y_k) - c(x0,y_j).
  SourceAtoms one;
  one.dim = 1;
  one.points = {make_point(0.2)};
  one.quad_weights = {1.0};
  one.densities = {1.0};
  one.masses = {1.0};
  PointList fine = {make_point(0.6), make_point(0.1)};
  const auto ref2 =
      softmax_refine(coarse, psi, fine, one, 0.05, CostKind::SqEuclidean);
  const auto c = [](double a, double b) { return 0.5 * (a - b) * (a - b); };
  CHECK(ref2[0] ==
        doctest::Approx(0.8 + c(0.2, 0.6) - c(0.2, 0.3)).epsilon(1e-10));
  CHECK(ref2[1] ==
        doctest::Approx(0.8 + c(0.2, 0.1) - c(0.2, 0.3)).epsilon(1e-10));
}

TEST_CASE("softmax_refine: same-level refinement restarts in few iterations") {
  const SourceAtoms atoms = uniform_interval_atoms(256, 2);
  const TargetMeasure target = asymmetric_1d_target();
  SolverConfig cfg;
  cfg.epsilon = 1e-3;
  cfg.delta_tol = 1e-8;
  auto [psi_star, rep] = solve(atoms, target, cfg);
  REQUIRE(rep.converged);

  const auto refined =
      softmax_refine(target, psi_star.values, target.points, atoms,
                     cfg.epsilon, cfg.cost_kind);
  std::vector<double> psi = refined;
  const StageReport rep2 = solve_single(atoms, target, cfg, psi);
  CHECK(rep2.status == SolveStatus::Converged);
  CHECK(rep2.iterations <= 5);
}

TEST_CASE("multilevel schedule: index formulas and epsilon assignment") {
  const MultilevelSchedule sched = make_multilevel_schedule(2, 4, 1e-3, 0);
  REQUIRE(sched.steps.size() == 5);
  CHECK(sched.L_max == 4);
  CHECK(sched.steps[0].i_s == 0);
  CHECK(sched.steps[0].i_t == 0);
  CHECK(sched.steps[2].i_s == 0);
  CHECK(sched.steps[2].i_t == 2);
  CHECK(sched.steps[4].i_s == 2);
  CHECK(sched.steps[4].i_t == 4);
  for (std::size_t l = 1; l < sched.steps.size(); ++l) {
    CHECK(sched.steps[l].i_s >= sched.steps[l - 1].i_s);
    CHECK(sched.steps[l].i_t >= sched.steps[l - 1].i_t);
  }

  const MultilevelSchedule with_eps = make_multilevel_schedule(0, 2, 1e-4, 2);
  CHECK(with_eps.steps[0].epsilon == doctest::Approx(1e-2));
  CHECK(with_eps.steps[1].epsilon == doctest::Approx(1e-3));
  CHECK(with_eps.steps[2].epsilon == doctest::Approx(1e-4));
}

TEST_CASE("solve_multilevel: single-level hierarchies reduce to solve") {
  const SourceAtoms atoms = uniform_interval_atoms(64, 2);
  const TargetMeasure target = asymmetric_1d_target();
  SolverConfig cfg;
  cfg.epsilon = 1e-2;
  cfg.delta_tol = 1e-8;

  SourceHierarchy shier;
  shier.levels.push_back(atoms);
  TargetHierarchy thier;
  thier.levels.push_back(target);
  auto [psi_ml, rep_ml] =
      solve_multilevel(shier, thier, cfg, MultilevelStrategy::Combined);
  auto [psi_single, rep_single] = solve(atoms, target, cfg);
  CHECK(psi_ml.values == psi_single.values);
}

TEST_CASE("solve_multilevel: target hierarchy cuts fine-level iterations") {
  const SourceAtoms atoms = uniform_interval_atoms(128, 2);  // 256 atoms
  TargetMeasure target;
  target.dim = 1;
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int j = 0; j < 64; ++j) {
    target.points.push_back(make_point(unit(rng)));
    target.weights.push_back(1.0 / 64.0);
  }

  SolverConfig cfg;
  cfg.epsilon = 1e-3;
  cfg.delta_tol = 1e-6;
  cfg.max_iterations = 2000;

  auto [psi_cold, rep_cold] = solve(atoms, target, cfg);
  REQUIRE(rep_cold.converged);

  SourceHierarchy shier;
  shier.levels.push_back(atoms);
  const TargetHierarchy thier = build_target_hierarchy(target, {4, 16, 64}, 7);
  auto [psi_ml, rep_ml] =
      solve_multilevel(shier, thier, cfg, MultilevelStrategy::TargetOnly);
  REQUIRE(rep_ml.converged);

  const int fine_iters = rep_ml.stages.back().iterations;
  CHECK(fine_iters * 4 <= rep_cold.stages.back().iterations);

  const DualPotential a = gauge_fixed(psi_cold, target.weights);
  const DualPotential b = gauge_fixed(psi_ml, target.weights);
  CHECK(linf_diff(a.values, b.values) <= 10.0 * cfg.delta_tol);
}

TEST_CASE("sinkhorn oracle: trivial and symmetric instances") {
  RandomInstance inst;
  inst.atoms = uniform_interval_atoms(8, 1);
  inst.target.dim = 1;
  inst.target.points = {make_point(0.5)};
  inst.target.weights = {1.0};
  const DualPotential ref =
      sinkhorn_oracle(inst.atoms, inst.target, 0.5, 1e-10);
  CHECK(ref.values[0] == doctest::Approx(0.0));
  CHECK(ref.gauge == Gauge::MeanZero);

  RandomInstance sym = two_by_two();
  sym.target.weights = {0.5, 0.5};
  const DualPotential ref2 = sinkhorn_oracle(sym.atoms, sym.target, 1.0, 1e-12);
  CHECK(std::abs(ref2.values[0]) <= 1e-9);
  CHECK(std::abs(ref2.values[1]) <= 1e-9);
}

TEST_CASE("sinkhorn oracle: agrees with the L-BFGS dual route") {
  const RandomInstance inst = two_by_two();
  SolverConfig cfg;
  cfg.epsilon = 1.0;
  cfg.delta_tol = 1e-12;
  auto [psi, rep] = solve(inst.atoms, inst.target, cfg);
  REQUIRE(rep.converged);
  const DualPotential ours = gauge_fixed(psi, inst.target.weights);
  const DualPotential ref =
      sinkhorn_oracle(inst.atoms, inst.target, 1.0, 1e-13);
  CHECK(linf_diff(ours.values, ref.values) <= 1e-6);
}

TEST_CASE("sinkhorn oracle: rejects oversized instances") {
  std::mt19937_64 rng(59);
  const RandomInstance inst = random_instance(rng, 1, 2, 2);
  CHECK_THROWS_AS(
      sinkhorn_oracle(inst.atoms, inst.target, 1e-9, 1e-300),
      std::runtime_error);  // unreachable tolerance exhausts the cap
}

TEST_CASE("h-refinement: gauge-fixed potentials form a Cauchy sequence") {
  const TargetMeasure target = asymmetric_1d_target();
  SolverConfig cfg;
  cfg.epsilon = 1e-2;
  cfg.delta_tol = 1e-13;
  cfg.max_iterations = 2000;

  std::vector<std::vector<double>> sols;
  for (int cells : {64, 256, 1024}) {
    const SourceAtoms atoms = uniform_interval_atoms(cells, 1);
    auto [psi, rep] = solve(atoms, target, cfg);
    REQUIRE(rep.converged);
    sols.push_back(gauge_fixed(psi, target.weights).values);
  }
  const auto l2 = [](const std::vector<double>& a,
                     const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
  };
  const double d1 = l2(sols[1], sols[0]);
  const double d2 = l2(sols[2], sols[1]);
  CHECK(d2 < d1);
}
