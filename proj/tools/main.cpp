#include <filesystem>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "rsot/barycenter.hpp"
#include "rsot/io.hpp"
#include "rsot/mesh.hpp"
#include "rsot/plan.hpp"
#include "rsot/quadrature.hpp"
#include "rsot/sinkhorn.hpp"
#include "rsot/solve.hpp"
#include "rsot/sphere.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using namespace rsot;
using cli::RunConfig;

namespace {

const std::set<std::string> kSolverKeys = {
    "epsilon",  "tau",           "delta_thr", "truncation", "tolerance",
    "max_iter", "scaling_steps", "cost",      "workers"};

SolverConfig solver_config(const RunConfig& cfg) {
  SolverConfig sc;
  sc.epsilon = cfg.get_double("epsilon", sc.epsilon);
  sc.tau = cfg.get_double("tau", sc.tau);
  sc.delta_thr = cfg.get_double("delta_thr", sc.delta_thr);
  sc.truncation = truncation_from_string(cfg.get_string("truncation", "none"));
  sc.delta_tol = cfg.get_double("tolerance", sc.delta_tol);
  sc.max_iterations = cfg.get_int("max_iter", sc.max_iterations);
  sc.scaling_steps = cfg.get_int("scaling_steps", sc.scaling_steps);
  sc.cost_kind = cost_kind_from_string(cfg.get_string("cost", "sqeuclidean"));
  sc.workers = cfg.get_int("workers", sc.workers);
  sc.validate();
  return sc;
}

/// Loads the source either from a mesh + density pair or from an atom CSV.
SourceAtoms load_source(const RunConfig& cfg) {
  if (cfg.has("source_atoms")) {
    const PointCloud cloud = load_point_cloud(cfg.require_string("source_atoms"));
    return atoms_from_point_cloud(cloud.dim, cloud.points, cloud.weights);
  }
  const SimplicialMesh mesh = load_mesh(cfg.require_string("source_mesh"));
  DensityField rho;
  if (cfg.has("source_density")) {
    rho = load_density(cfg.require_string("source_density"), mesh);
  } else {
    rho.values.assign(mesh.vertex_count(), 1.0);
  }
  const QuadratureSpec quad{cfg.get_int("quadrature_order", 2)};
  return atomize(mesh, rho, quad);
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  const fs::path dir = cfg.get_string("output_dir", ".");
  fs::create_directories(dir);
  return (dir / name).string();
}

int cmd_solve(const RunConfig& cfg) {
  std::set<std::string> keys = kSolverKeys;
  keys.insert({"source_mesh", "source_density", "source_atoms", "target",
               "quadrature_order", "output_dir", "strategy", "seed",
               "source_levels", "target_levels", "source_hierarchy",
               "target_hierarchy"});
  cfg.check_keys(keys);

  const SourceAtoms atoms = load_source(cfg);
  const TargetMeasure target = load_target_measure(cfg.require_string("target"));
  const SolverConfig sc = solver_config(cfg);
  const std::string strategy = cfg.get_string("strategy", "single");
  const std::uint64_t seed = cfg.get_seed("seed", 0);

  DualPotential psi;
  SolverReport report;
  if (strategy == "single") {
    std::tie(psi, report) = solve(atoms, target, sc);
  } else {
    SourceHierarchy shier;
    if (cfg.has("source_hierarchy")) {
      shier = load_source_hierarchy_levels(cfg.require_string("source_hierarchy"));
    } else if (cfg.has("source_levels")) {
      shier = build_source_hierarchy(atoms, nearest_atom_density_oracle(atoms),
                                     cfg.get_size_list("source_levels"), seed);
    } else {
      shier.levels.push_back(atoms);
    }
    TargetHierarchy thier;
    if (cfg.has("target_hierarchy")) {
      thier = load_target_hierarchy_levels(cfg.require_string("target_hierarchy"));
    } else if (cfg.has("target_levels")) {
      thier = build_target_hierarchy(target, cfg.get_size_list("target_levels"),
                                     seed);
    } else {
      thier.levels.push_back(target);
    }
    MultilevelStrategy ms;
    if (strategy == "source") ms = MultilevelStrategy::SourceOnly;
    else if (strategy == "target") ms = MultilevelStrategy::TargetOnly;
    else if (strategy == "combined") ms = MultilevelStrategy::Combined;
    else throw std::runtime_error("unknown strategy: " + strategy);
    std::tie(psi, report) = solve_multilevel(shier, thier, sc, ms);
  }

  write_potential(out_path(cfg, "potential.csv"), psi);
  write_report(out_path(cfg, "report.json"), report);
  std::cout << "solve: " << (report.converged ? "converged" : "not converged")
            << ", iterations=" << report.total_iterations()
            << ", grad_l1=" << report.stages.back().final_grad_l1 << "\n";
  return report.converged ? 0 : 1;
}

int cmd_hierarchy(const RunConfig& cfg) {
  cfg.check_keys({"input", "sizes", "kind", "output_dir", "seed", "workers"});
  const std::string kind = cfg.get_string("kind", "target");
  const auto sizes = cfg.get_size_list("sizes");
  const std::uint64_t seed = cfg.get_seed("seed", 0);
  const fs::path dir = cfg.get_string("output_dir", ".");

  if (kind == "target") {
    const TargetMeasure target =
        load_target_measure(cfg.require_string("input"));
    write_target_hierarchy(dir.string(),
                           build_target_hierarchy(target, sizes, seed));
  } else if (kind == "source") {
    const PointCloud cloud = load_point_cloud(cfg.require_string("input"));
    const SourceAtoms atoms =
        atoms_from_point_cloud(cloud.dim, cloud.points, cloud.weights);
    write_source_hierarchy(
        dir.string(),
        build_source_hierarchy(atoms, nearest_atom_density_oracle(atoms),
                               sizes, seed));
  } else {
    throw std::runtime_error("hierarchy kind must be target or source");
  }
  std::cout << "hierarchy: " << sizes.size() << " levels written to " << dir
            << "\n";
  return 0;
}

int cmd_barycenter(const RunConfig& cfg) {
  std::set<std::string> keys = kSolverKeys;
  keys.insert({"sources", "lambda", "support_size", "damping", "output_dir",
               "seed", "outer_max_iter", "rms_tol", "alpha", "beta"});
  cfg.check_keys(keys);

  BarycenterConfig bc;
  bc.inner = solver_config(cfg);
  bc.support_size = static_cast<std::size_t>(cfg.get_int("support_size", 1));
  bc.damping = cfg.get_double("damping", 0.5);
  bc.alpha = cfg.get_double("alpha", 0.1);
  bc.beta = cfg.get_double("beta", 0.1);
  bc.rms_tol = cfg.get_double("rms_tol", 1e-5);
  bc.max_outer_iterations = cfg.get_int("outer_max_iter", 100);

  std::vector<BarycenterSource> sources;
  for (const auto& path : cfg.get_string_list("sources")) {
    const PointCloud cloud = load_point_cloud(path);
    sources.push_back(
        {atoms_from_point_cloud(cloud.dim, cloud.points, cloud.weights),
         nullptr});
  }
  if (cfg.has("lambda")) {
    bc.lambdas = cfg.get_double_list("lambda");
  } else {
    bc.lambdas.assign(sources.size(),
                      1.0 / static_cast<double>(sources.size()));
  }

  // Initial support: seeded draws from the first source's atoms.
  std::mt19937_64 rng(cfg.get_seed("seed", 0));
  std::uniform_int_distribution<std::size_t> pick(0,
                                                  sources[0].atoms.size() - 1);
  PointList y0;
  for (std::size_t j = 0; j < bc.support_size; ++j)
    y0.push_back(sources[0].atoms.points[pick(rng)]);

  const auto [points, trace] = barycenter_lloyd(sources, bc, y0);

  const std::vector<double> uniform(bc.support_size,
                                    1.0 / static_cast<double>(bc.support_size));
  write_point_cloud(out_path(cfg, "barycenter.csv"), sources[0].atoms.dim,
                    points, uniform);
  write_scalar_column(out_path(cfg, "rms_trace.csv"), "rms_movement",
                      trace.rms_movement);
  for (std::size_t t = 0; t < trace.snapshots.size(); ++t)
    write_point_cloud(
        out_path(cfg, "barycenter_iter_" + std::to_string(t) + ".csv"),
        sources[0].atoms.dim, trace.snapshots[t], uniform);
  std::cout << "barycenter: "
            << (trace.converged ? "converged" : "max iterations") << " after "
            << trace.iterations << " outer iterations\n";
  return trace.converged ? 0 : 1;
}

int cmd_register(const RunConfig& cfg) {
  std::set<std::string> keys = kSolverKeys;
  keys.insert({"source_mesh", "source_density", "source_atoms", "target",
               "quadrature_order", "output_dir", "field"});
  cfg.check_keys(keys);

  const SourceAtoms atoms = load_source(cfg);
  const TargetMeasure target = load_target_measure(cfg.require_string("target"));
  const SolverConfig sc = solver_config(cfg);

  auto [psi, report] = solve(atoms, target, sc);
  write_potential(out_path(cfg, "potential.csv"), psi);
  write_report(out_path(cfg, "report.json"), report);

  PlanView plan(atoms, target, psi, sc.epsilon, sc.cost_kind);
  plan.set_convergence(report.stages.back().final_grad_l1, sc.delta_tol);

  const MapSample bary = barycentric_map(plan);
  const MapSample modal = modal_map(plan);
  write_point_cloud(out_path(cfg, "map_barycentric.csv"), atoms.dim,
                    bary.mapped, bary.displacement);
  write_point_cloud(out_path(cfg, "map_modal.csv"), atoms.dim, modal.mapped,
                    modal.displacement);
  write_scalar_column(out_path(cfg, "displacement_barycentric.csv"),
                      "displacement", bary.displacement);
  write_scalar_column(out_path(cfg, "displacement_modal.csv"), "displacement",
                      modal.displacement);

  const double alphas[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  int idx = 0;
  for (double a : alphas) {
    const PointList snap = displacement_interpolate(plan, bary, a);
    write_point_cloud(
        out_path(cfg, "interp_" + std::to_string(idx++) + ".csv"), atoms.dim,
        snap, atoms.masses);
  }

  if (cfg.has("field")) {
    const std::vector<double> field =
        load_scalar_column(cfg.require_string("field"));
    const TransferredField tb = transfer_field(plan, bary, field);
    write_point_cloud(out_path(cfg, "field_barycentric.csv"), atoms.dim,
                      tb.points, tb.values);
    const TransferredField tm = transfer_field(plan, modal, field);
    write_point_cloud(out_path(cfg, "field_modal.csv"), atoms.dim, tm.points,
                      tm.values);
    write_scalar_column(out_path(cfg, "field_modal_mean.csv"), "mean_value",
                        tm.mean_value_per_target);
  }
  std::cout << "register: "
            << (report.converged ? "converged" : "not converged")
            << ", max displacement "
            << *std::max_element(bary.displacement.begin(),
                                 bary.displacement.end())
            << "\n";
  return report.converged ? 0 : 1;
}

int cmd_bluenoise(const RunConfig& cfg) {
  std::set<std::string> keys = kSolverKeys;
  keys.insert({"n_points", "n_atoms", "density", "movement_tol",
               "outer_max_iter", "seed", "output_dir"});
  cfg.check_keys(keys);

  BlueNoiseConfig bn;
  bn.inner = solver_config(cfg);
  bn.inner.cost_kind = CostKind::SqGeodesicSphere;
  bn.point_count = static_cast<std::size_t>(cfg.get_int("n_points", 16));
  bn.movement_tol = cfg.get_double("movement_tol", 1e-3);
  bn.max_outer_iterations = cfg.get_int("outer_max_iter", 200);
  bn.seed = cfg.get_seed("seed", 0);

  const std::size_t n_atoms =
      static_cast<std::size_t>(cfg.get_int("n_atoms", 2000));
  const std::string density = cfg.get_string("density", "zonal");
  const SourceAtoms atoms = sphere::fibonacci_atoms(
      n_atoms,
      density == "uniform"
          ? std::function<double(const Point&)>([](const Point&) { return 1.0; })
          : std::function<double(const Point&)>(sphere::zonal_test_density));

  const auto [points, trace] = blue_noise_sphere(atoms, bn);
  const std::vector<double> uniform(bn.point_count,
                                    1.0 / static_cast<double>(bn.point_count));
  write_point_cloud(out_path(cfg, "bluenoise.csv"), 3, points, uniform);
  write_scalar_column(out_path(cfg, "movement_trace.csv"), "relative_movement",
                      trace.relative_movement);
  std::cout << "bluenoise: "
            << (trace.converged ? "converged" : "max iterations") << " after "
            << trace.iterations << " outer iterations\n";
  return trace.converged ? 0 : 1;
}

int cmd_validate(const RunConfig& cfg) {
  std::set<std::string> keys = kSolverKeys;
  keys.insert({"source_mesh", "source_density", "source_atoms", "target",
               "quadrature_order", "output_dir", "seed"});
  cfg.check_keys(keys);

  const SourceAtoms atoms = load_source(cfg);
  const TargetMeasure target = load_target_measure(cfg.require_string("target"));
  SolverConfig sc = solver_config(cfg);

  // Gradient vs central finite differences at a random potential.
  std::mt19937_64 rng(cfg.get_seed("seed", 0));
  std::normal_distribution<double> gauss(0.0, 0.1);
  std::vector<double> psi(target.size());
  for (double& v : psi) v = gauss(rng);

  const SpatialIndex index(target.points);
  TruncationState trunc;
  trunc.set_weight_stats(target.weights);
  trunc.covering = covering_cost(atoms, target, sc.cost_kind);

  const auto eval = [&](const std::vector<double>& p) {
    return evaluate_dual(atoms, target, DualPotential{p, Gauge::Raw}, sc,
                         trunc, index);
  };
  const EvalResult base = eval(psi);
  double worst = 0.0;
  for (std::size_t k = 0; k < psi.size(); ++k) {
    const double h = 1e-6 * (1.0 + std::abs(psi[k]));
    std::vector<double> plus = psi, minus = psi;
    plus[k] += h;
    minus[k] -= h;
    const double fd = (eval(plus).J - eval(minus).J) / (2.0 * h);
    worst = std::max(worst, std::abs(base.gradient[k] - fd) /
                                std::max(1e-10, std::abs(fd)));
  }
  const bool grad_ok = worst <= 1e-5;
  std::cout << "gradient check: max relative deviation " << worst << " -> "
            << (grad_ok ? "ok" : "FAIL") << "\n";

  bool oracle_ok = true;
  if (atoms.size() * target.size() <= 1000000) {
    SolverConfig tight = sc;
    tight.delta_tol = 1e-10;
    tight.truncation = TruncationKind::None;
    auto [psi_opt, report] = solve(atoms, target, tight);
    const DualPotential ours = gauge_fixed(psi_opt, target.weights);
    const DualPotential ref =
        sinkhorn_oracle(atoms, target, tight.epsilon, 1e-12, tight.cost_kind);
    double linf = 0.0;
    for (std::size_t j = 0; j < target.size(); ++j)
      linf = std::max(linf, std::abs(ours.values[j] - ref.values[j]));
    oracle_ok = linf <= 1e-5 && report.converged;
    std::cout << "sinkhorn oracle check: Linf deviation " << linf << " -> "
              << (oracle_ok ? "ok" : "FAIL") << "\n";
  } else {
    std::cout << "sinkhorn oracle check: skipped (instance too large)\n";
  }
  return grad_ok && oracle_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy-regularized semi-discrete optimal transport toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key=value configuration file");
    sub->add_option("--set", overrides,
                    "override a config key, e.g. --set epsilon=1e-3");
  };

  CLI::App* solve_cmd = app.add_subcommand("solve", "solve one RSOT problem");
  CLI::App* hier_cmd =
      app.add_subcommand("hierarchy", "build measure hierarchies");
  CLI::App* bary_cmd =
      app.add_subcommand("barycenter", "Wasserstein barycenter via Lloyd");
  CLI::App* reg_cmd =
      app.add_subcommand("register", "transport maps between two shapes");
  CLI::App* blue_cmd =
      app.add_subcommand("bluenoise", "blue-noise sampling on the sphere");
  CLI::App* val_cmd =
      app.add_subcommand("validate", "gradient and oracle self-checks");
  for (CLI::App* sub :
       {solve_cmd, hier_cmd, bary_cmd, reg_cmd, blue_cmd, val_cmd})
    add_common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg =
        config_path.empty() ? RunConfig() : RunConfig::from_file(config_path);
    for (const auto& o : overrides) cfg.apply_override(o);

    if (solve_cmd->parsed()) return cmd_solve(cfg);
    if (hier_cmd->parsed()) return cmd_hierarchy(cfg);
    if (bary_cmd->parsed()) return cmd_barycenter(cfg);
    if (reg_cmd->parsed()) return cmd_register(cfg);
    if (blue_cmd->parsed()) return cmd_bluenoise(cfg);
    if (val_cmd->parsed()) return cmd_validate(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
