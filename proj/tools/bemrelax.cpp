/** @file bemrelax.cpp
 * @brief Command-line front end: mesh generation, single solves and studies
 */

#include <bemrelax/bem.hpp>
#include <bemrelax/mesh.hpp>
#include <bemrelax/solver.hpp>
#include <bemrelax/study.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>

using namespace bemrelax;

namespace {

const std::map<std::string, bem::Formulation> kProblems{{"laplace1", bem::Formulation::Laplace1stKind},
                                                        {"laplace2", bem::Formulation::Laplace2ndKind},
                                                        {"stokes", bem::Formulation::StokesTraction1stKind}};
const std::map<std::string, study::Geometry> kGeometries{{"sphere", study::Geometry::Sphere},
                                                         {"rbc", study::Geometry::Rbc}};
const std::map<std::string, bool> kOnOff{{"on", true}, {"off", false}};

struct SolverFlags {
  std::string problem = "laplace1";
  int p = 10;
  int p_min = 1;
  bool relax = true;
  double tol = 1e-6;
  int max_iters = 100;
  int ncrit = 126;
  double theta = 0.5;
  int gauss_far = 4;
  int gauss_near = 19;
  int threads = 0;
  double mu = 1e-3;
  std::size_t cache_mb = 1024;

  void attach(CLI::App* app) {
    app->add_option("--problem", problem, "laplace1 | laplace2 | stokes")
        ->check(CLI::IsMember({"laplace1", "laplace2", "stokes"}));
    app->add_option("--p", p, "initial (and fixed) expansion order")->check(CLI::Range(0, 40));
    app->add_option("--p-min", p_min, "lowest order allowed by relaxation")->check(CLI::Range(0, 40));
    app->add_option("--relax", relax, "on | off")->transform(CLI::CheckedTransformer(kOnOff));
    app->add_option("--tol", tol, "relative residual target");
    app->add_option("--max-iters", max_iters, "GMRES iteration limit");
    app->add_option("--ncrit", ncrit, "octree leaf capacity");
    app->add_option("--theta", theta, "multipole acceptance ratio");
    app->add_option("--gauss-far", gauss_far, "far-field rule size (1, 3, 4, 7, 19)");
    app->add_option("--gauss-near", gauss_near, "near-field rule size (1, 3, 4, 7, 19)");
    app->add_option("--threads", threads, "OpenMP threads (0: default)");
    app->add_option("--mu", mu, "viscosity for Stokes problems");
    app->add_option("--near-cache-mb", cache_mb, "memory budget for cached near-field entries");
  }

  study::ProblemSpec spec() const {
    study::ProblemSpec s;
    s.formulation = kProblems.at(problem);
    s.physics.mu = mu;
    return s;
  }

  study::SolveParams params() const {
    study::SolveParams sp;
    sp.solver.tol = tol;
    sp.solver.max_iters = max_iters;
    sp.solver.p_initial = p;
    sp.solver.p_min = std::min(p_min, p);
    sp.solver.relax = relax;
    sp.op.fmm.n_crit = ncrit;
    sp.op.fmm.theta = theta;
    sp.op.fmm.threads = threads;
    sp.op.quad.far_points = gauss_far;
    sp.op.quad.near_points = gauss_near;
    sp.op.near_cache_budget = cache_mb << 20;
    sp.repeats = 1;
    return sp;
  }
};

void emit_report(const study::StudyReport& rep, const std::string& path, const std::string& csv) {
  if (path.empty()) {
    rep.write(std::cout);
  } else {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    rep.write(out);
  }
  if (!csv.empty()) {
    std::ofstream out(csv);
    if (!out) throw std::runtime_error("cannot write " + csv);
    rep.write_csv(out);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary element solver with relaxed fast multipole products"};
  app.require_subcommand(1);

  // mesh ----------------------------------------------------------------------------------------
  auto* mesh_cmd = app.add_subcommand("mesh", "generate a surface mesh");
  mesh_cmd->require_subcommand(1);
  int level = 3;
  double radius = 1.0;
  int cells = 4;
  std::uint64_t seed = 1;
  std::string mesh_out;
  auto* m_sphere = mesh_cmd->add_subcommand("sphere", "refined octahedron projected onto a sphere");
  auto* m_rbc = mesh_cmd->add_subcommand("rbc", "red blood cell");
  auto* m_scene = mesh_cmd->add_subcommand("scene", "randomly placed red blood cells");
  for (auto* c : {m_sphere, m_rbc, m_scene}) {
    c->add_option("--level", level, "subdivision level (8*4^level panels per cell)")->check(CLI::Range(0, 8));
    c->add_option("--output,-o", mesh_out, "mesh file (stdout when omitted)");
  }
  m_sphere->add_option("--radius", radius, "sphere radius");
  m_scene->add_option("--cells", cells, "number of cells")->check(CLI::PositiveNumber);
  m_scene->add_option("--seed", seed, "placement seed");

  // solve ---------------------------------------------------------------------------------------
  auto* solve_cmd = app.add_subcommand("solve", "solve one boundary value problem");
  SolverFlags sf;
  sf.attach(solve_cmd);
  std::string mesh_path, report_path, residual_csv, geometry = "sphere";
  int solve_level = 3;
  solve_cmd->add_option("--mesh", mesh_path, "mesh file; otherwise generated from --geometry/--level");
  solve_cmd->add_option("--geometry", geometry, "sphere | rbc")->check(CLI::IsMember({"sphere", "rbc"}));
  solve_cmd->add_option("--level", solve_level, "subdivision level for generated meshes")->check(CLI::Range(0, 8));
  solve_cmd->add_option("--output", report_path, "report file (stdout when omitted)");
  solve_cmd->add_option("--residuals", residual_csv, "per-iteration CSV");

  // study ---------------------------------------------------------------------------------------
  auto* study_cmd = app.add_subcommand("study", "run an experiment");
  study_cmd->require_subcommand(1);
  SolverFlags tf;
  std::vector<int> levels{2, 3, 4, 5};
  std::vector<int> ncrit_candidates{100, 200, 400};
  std::vector<std::size_t> sizes{10000, 40000, 160000, 640000};
  int repeats = 3, study_level = 4, rbc_cells = 1;
  std::string study_out, study_csv, study_geometry = "sphere";
  auto* s_conv = study_cmd->add_subcommand("convergence", "error against mesh refinement");
  auto* s_relax = study_cmd->add_subcommand("relaxation", "fixed versus relaxed order");
  auto* s_scale = study_cmd->add_subcommand("scaling", "N-body evaluation time against N");
  auto* s_rbc = study_cmd->add_subcommand("rbc", "red blood cell drag with extrapolation");
  for (auto* c : {s_conv, s_relax, s_scale, s_rbc}) {
    c->add_option("--output", study_out, "report file (stdout when omitted)");
    c->add_option("--csv", study_csv, "CSV file with one row per run");
    c->add_option("--repeats", repeats, "identical runs averaged per timing")->check(CLI::PositiveNumber);
    c->add_option("--seed", seed, "random seed");
  }
  for (auto* c : {s_conv, s_relax, s_rbc}) tf.attach(c);
  s_conv->add_option("--levels", levels, "subdivision levels")->delimiter(',');
  s_conv->add_option("--geometry", study_geometry, "sphere | rbc")->check(CLI::IsMember({"sphere", "rbc"}));
  s_rbc->add_option("--levels", levels, "subdivision levels")->delimiter(',');
  s_rbc->add_option("--cells", rbc_cells, "cells in the scene")->check(CLI::PositiveNumber);
  s_relax->add_option("--level", study_level, "subdivision level")->check(CLI::Range(0, 8));
  s_relax->add_option("--geometry", study_geometry, "sphere | rbc")->check(CLI::IsMember({"sphere", "rbc"}));
  s_relax->add_option("--cells", rbc_cells, "cells in the scene")->check(CLI::PositiveNumber);
  s_relax->add_option("--ncrit-candidates", ncrit_candidates, "n_crit values tried per variant")->delimiter(',');
  int scale_p = 5, scale_ncrit = 126, scale_threads = 0;
  s_scale->add_option("--sizes", sizes, "body counts")->delimiter(',');
  s_scale->add_option("--p", scale_p, "expansion order");
  s_scale->add_option("--ncrit", scale_ncrit, "octree leaf capacity");
  s_scale->add_option("--threads", scale_threads, "OpenMP threads (0: default)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (mesh_cmd->parsed()) {
      mesh::TriMesh m;
      if (m_sphere->parsed()) {
        m = mesh::make_sphere(level, radius);
      } else {
        auto rbc = mesh::rbc_transform(mesh::make_sphere(level, 1.0));
        if (rbc.clamped_vertices > 0)
          std::cerr << "warning: " << rbc.clamped_vertices << " vertices clamped to the rim\n";
        m = m_scene->parsed() ? mesh::make_scene(rbc.mesh, cells, seed) : rbc.mesh;
      }
      if (mesh_out.empty()) mesh::write_mesh(m, std::cout);
      else mesh::write_mesh(m, std::filesystem::path(mesh_out));
      return 0;
    }

    if (solve_cmd->parsed()) {
      auto spec = sf.spec();
      spec.geometry = kGeometries.at(geometry);
      mesh::TriMesh m;
      if (!mesh_path.empty()) {
        mesh::MeshReadInfo info;
        m = mesh::read_mesh(std::filesystem::path(mesh_path), &info);
        if (!info.closed) std::cerr << "warning: " << info.warning << '\n';
      } else {
        m = study::build_geometry(spec, solve_level);
      }
      const auto params = sf.params();
      const auto o = study::solve(m, spec, params);
      study::StudyReport rep;
      rep.kind = "solve";
      rep.notes["problem"] = sf.problem;
      rep.notes["residual"] = "relative";
      rep.notes["status"] = o.result.converged() ? "converged" : o.result.diagnostic;
      rep.derived["setup_seconds"] = o.setup_seconds;
      rep.derived["final_rel_residual"] = o.result.rel_residual;
      if (spec.formulation == bem::Formulation::StokesTraction1stKind) {
        const Vec3 f = bem::drag_force(m, o.result.x);
        rep.derived["drag_x"] = f.x;
        rep.derived["drag_y"] = f.y;
        rep.derived["drag_z"] = f.z;
      }
      rep.runs.push_back(study::make_record(m.size() == 0 ? "empty" : "solve", o, params));
      emit_report(rep, report_path, "");
      if (!residual_csv.empty()) {
        std::ofstream out(residual_csv);
        if (!out) throw std::runtime_error("cannot write " + residual_csv);
        solver::write_residual_csv(o.result.schedule, out);
      }
      return o.result.converged() ? 0 : 2;
    }

    study::StudyReport rep;
    if (s_scale->parsed()) {
      rep = study::run_scaling(sizes, scale_p, scale_ncrit, seed, repeats, scale_threads);
    } else {
      auto spec = tf.spec();
      spec.seed = seed;
      spec.cells = rbc_cells;
      spec.geometry = kGeometries.at(study_geometry);
      auto params = tf.params();
      params.repeats = repeats;
      if (s_conv->parsed()) {
        rep = study::run_convergence(spec, levels, params);
      } else if (s_rbc->parsed()) {
        spec.formulation = bem::Formulation::StokesTraction1stKind;
        spec.geometry = study::Geometry::Rbc;
        rep = study::run_convergence(spec, levels, params);
        rep.kind = "rbc";
      } else {
        rep = study::run_relaxation_comparison(spec, study_level, params, ncrit_candidates);
      }
    }
    emit_report(rep, study_out, study_csv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
