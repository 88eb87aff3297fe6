#pragma once

/** @file solver.hpp
 * @brief Full GMRES with per-iteration expansion order chosen from the current residual
 *
 * Iteration k multiplies with order p_k = clamp(ceil(-log2 eps_k), p_min, p_initial), where
 * eps_k = min(tol / min(r_{k-1}, 1), 1) and r_{k-1} is the relative residual estimate of the
 * previous iteration (r_0 = 1, so p_1 = p_initial). Without relaxation p_k = p_initial throughout.
 */

#include <bemrelax/linear_operator.hpp>

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace bemrelax::solver {

struct SolverConfig {
  double tol = 1e-6;  // relative residual target
  int max_iters = 100;
  int p_initial = 10;
  int p_min = 1;
  bool relax = true;

  //! Throws std::invalid_argument unless 0 < tol < 1, max_iters >= 1 and 0 <= p_min <= p_initial.
  void validate() const;
};

double relax_eps(double tol, double r_prev);
int schedule_p(double eps, int p_min, int p_initial);

struct IterationRecord {
  int k = 0;
  double r_prev = 0;        // relative residual entering the iteration
  double eps = 0;           // allowed product accuracy
  int p = 0;                // order used
  double seconds = 0;       // wall time of the iteration
  double rel_residual = 0;  // relative residual after the iteration
};

struct RelaxationSchedule {
  std::vector<IterationRecord> records;

  bool p_non_increasing() const;
  int p_max() const;
  int p_last() const;
};

enum class Status { Converged, MaxIterations, Breakdown };

struct GmresResult {
  std::vector<double> x;
  RelaxationSchedule schedule;
  Status status = Status::MaxIterations;
  int iterations = 0;
  double rel_residual = 1;
  double seconds = 0;  // wall time of the iteration loop
  std::string diagnostic;

  bool converged() const { return status == Status::Converged; }
};

/**
 * Solves A x = b from x0 = 0 with modified Gram-Schmidt Arnoldi and Givens rotations.
 * Throws std::invalid_argument for a dimension mismatch or b = 0, and std::logic_error if the
 * scheduled order ever increases.
 */
GmresResult gmres(const LinearOperator& op, std::span<const double> b, const SolverConfig& cfg);

//! Columns: iter, rel_residual, p_used, eps_k, t_iter_seconds.
void write_residual_csv(const RelaxationSchedule& s, std::ostream& out);

}  // namespace bemrelax::solver
