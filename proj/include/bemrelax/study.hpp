#pragma once

/** @file study.hpp
 * @brief Convergence, relaxation-speedup and scaling experiments with structured reports
 */

#include <bemrelax/bem.hpp>
#include <bemrelax/mesh.hpp>
#include <bemrelax/solver.hpp>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace bemrelax::study {

//! ln((f2 - f1)/(f3 - f2)) / ln c. Throws std::domain_error for a non-monotone triple or c <= 1.
double observed_order(double f1, double f2, double f3, double c);
//! (f1 f3 - f2^2)/(f1 - 2 f2 + f3). Throws std::domain_error when the denominator vanishes.
double richardson(double f1, double f2, double f3);
//! Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

enum class Geometry { Sphere, Rbc };

struct ProblemSpec {
  bem::Formulation formulation = bem::Formulation::Laplace1stKind;
  Geometry geometry = Geometry::Sphere;
  int cells = 1;  // copies placed by make_scene
  std::uint64_t seed = 1;
  bem::PhysicalParams physics;
};

struct SolveParams {
  solver::SolverConfig solver;
  bem::OperatorConfig op;
  int repeats = 3;
};

//! Surface of the problem at subdivision level `level` (8 * 4^level panels per cell).
mesh::TriMesh build_geometry(const ProblemSpec& spec, int level);

struct SolveOutcome {
  solver::GmresResult result;  // from the last repeat
  std::size_t panels = 0;
  double setup_seconds = 0;
  std::vector<double> solve_seconds;  // one per repeat
  double error = 0;  // Laplace: RMS deviation from 1; Stokes sphere: relative drag error
  double value = 0;  // Laplace: RMS error; Stokes: drag F_x
};

SolveOutcome solve(const mesh::TriMesh& mesh, const ProblemSpec& spec, const SolveParams& params);

struct RunRecord {
  std::string label;
  std::size_t panels = 0;
  int n_crit = 0;
  int p_initial = 0;
  int p_min = 0;
  bool relax = false;
  double tol = 0;
  int iterations = 0;
  bool converged = false;
  int repeats = 0;
  double seconds_mean = 0, seconds_min = 0, seconds_max = 0;
  double error = 0;
  double value = 0;
};

struct StudyReport {
  std::string kind;
  std::vector<RunRecord> runs;
  std::map<std::string, double> derived;
  std::map<std::string, std::string> notes;

  //! key = value text, one entry per line.
  void write(std::ostream& out) const;
  static StudyReport read(std::istream& in);
  //! One CSV row per run.
  void write_csv(std::ostream& out) const;
};

RunRecord make_record(const std::string& label, const SolveOutcome& o, const SolveParams& params);

/**
 * Solves on each level and reports per-level errors and the observed order with refinement ratio 4
 * (panel count). With five or more levels the middle triple is used, otherwise the finest three.
 * Sphere problems measure errors against the analytic solution; RBC problems extrapolate the drag.
 */
StudyReport run_convergence(const ProblemSpec& spec, const std::vector<int>& levels, const SolveParams& params);

/**
 * Fixed-p and relaxed solves of the same problem. Each variant uses the fastest n_crit among the
 * candidates (mean over repeats); reports speedup = t_fixed / t_relaxed and the relative solution
 * difference.
 */
StudyReport run_relaxation_comparison(const ProblemSpec& spec, int level, const SolveParams& params,
                                      const std::vector<int>& ncrit_candidates);

//! Laplace N-body evaluation on uniform random points; reports times and the fitted log-log slope.
StudyReport run_scaling(const std::vector<std::size_t>& sizes, int p, int n_crit, std::uint64_t seed, int repeats,
                        int threads = 0);

}  // namespace bemrelax::study
