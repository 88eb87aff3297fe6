/** @file test_solver.cpp
 * @brief GMRES with relaxed expansion order
 */

#include <bemrelax/bem.hpp>
#include <bemrelax/solver.hpp>

#include <doctest.h>

#include "../oracles/oracles.hpp"

#include <sstream>

using namespace bemrelax;
using namespace bemrelax::solver;

namespace {

//! Dense operator that records the order requested by every product.
class RecordingOperator : public LinearOperator {
 public:
  explicit RecordingOperator(DenseMatrixOperator a) : a_(std::move(a)) {}
  std::size_t size() const override { return a_.size(); }
  void apply(std::span<const double> x, int p, std::span<double> y) const override {
    orders.push_back(p);
    a_.apply(x, p, y);
  }
  mutable std::vector<int> orders;

 private:
  DenseMatrixOperator a_;
};

std::vector<double> diagonally_dominant(std::size_t n, std::uint64_t seed) {
  const auto u = oracle::lcg_points(n * n, seed);
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n * n; ++i) a[i] = u[i].x - 0.5;
  for (std::size_t i = 0; i < n; ++i) a[i * n + i] = static_cast<double>(n);
  return a;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("relaxed accuracy from the previous residual") {
  CHECK(relax_eps(1e-6, 1e-3) == doctest::Approx(1e-3));
  CHECK(relax_eps(1e-6, 10.0) == doctest::Approx(1e-6));
  CHECK(relax_eps(1e-6, 1e-7) == 1.0);
}

TEST_CASE("scheduled order is clamped to [p_min, p_initial]") {
  CHECK(schedule_p(1e-3, 1, 12) == 10);
  CHECK(schedule_p(1.0, 5, 12) == 5);
  CHECK(schedule_p(1e-9, 1, 12) == 12);
}

TEST_CASE("configuration is validated") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  c.tol = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.p_min = 11;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.max_iters = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("identity converges in one iteration with x = b") {
  const std::size_t n = 20;
  std::vector<double> eye(n * n, 0.0), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    eye[i * n + i] = 1.0;
    b[i] = 1.0 + i;
  }
  const auto r = gmres(DenseMatrixOperator(n, eye), b, {});
  CHECK(r.converged());
  CHECK(r.iterations == 1);
  for (std::size_t i = 0; i < n; ++i) CHECK(r.x[i] == doctest::Approx(b[i]).epsilon(1e-14));
}

TEST_CASE("random diagonally dominant system matches direct elimination") {
  const std::size_t n = 50;
  const auto a = diagonally_dominant(n, 3);
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = std::cos(0.9 * i);
  SolverConfig c;
  c.tol = 1e-13;
  const auto r = gmres(DenseMatrixOperator(n, a), b, c);
  REQUIRE(r.converged());
  CHECK(oracle::l2_rel(r.x, oracle::lu_solve(a, b)) < 1e-10);
}

TEST_CASE("schedule: p_1 = p_initial, bounded, non-increasing, residuals non-increasing") {
  const std::size_t n = 60;
  RecordingOperator op(DenseMatrixOperator(n, diagonally_dominant(n, 9)));
  std::vector<double> b(n, 1.0);
  SolverConfig c;
  c.tol = 1e-10;
  c.p_initial = 14;
  c.p_min = 3;
  const auto r = gmres(op, b, c);
  REQUIRE(r.converged());
  const auto& rec = r.schedule.records;
  REQUIRE(rec.size() == static_cast<std::size_t>(r.iterations));
  CHECK(rec.front().p == 14);
  CHECK(r.schedule.p_non_increasing());
  for (std::size_t k = 0; k < rec.size(); ++k) {
    CHECK(rec[k].p == op.orders[k]);
    CHECK(rec[k].p >= 3);
    CHECK(rec[k].p <= 14);
    CHECK(rec[k].p == schedule_p(relax_eps(c.tol, rec[k].r_prev), 3, 14));
    if (k > 0) CHECK(rec[k].rel_residual <= rec[k - 1].rel_residual);
  }
  CHECK(r.schedule.p_last() <= r.schedule.p_max());
}

TEST_CASE("without relaxation every product uses p_initial") {
  const std::size_t n = 30;
  RecordingOperator op(DenseMatrixOperator(n, diagonally_dominant(n, 5)));
  SolverConfig c;
  c.relax = false;
  c.p_initial = 7;
  const auto r = gmres(op, std::vector<double>(n, 1.0), c);
  CHECK(r.converged());
  for (int p : op.orders) CHECK(p == 7);
}

TEST_CASE("iteration limit and zero right-hand side") {
  const std::size_t n = 40;
  std::vector<double> a(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) a[i * n + i] = 1.0 + i;  // distinct eigenvalues
  SolverConfig c;
  c.max_iters = 5;
  const auto r = gmres(DenseMatrixOperator(n, a), std::vector<double>(n, 1.0), c);
  CHECK(r.status == Status::MaxIterations);
  CHECK(r.iterations == 5);
  CHECK_FALSE(r.diagnostic.empty());
  CHECK_THROWS_AS(gmres(DenseMatrixOperator(n, a), std::vector<double>(n, 0.0), c), std::invalid_argument);
  CHECK_THROWS_AS(gmres(DenseMatrixOperator(n, a), std::vector<double>(3, 1.0), c), std::invalid_argument);
}

TEST_CASE("residual history CSV") {
  const std::size_t n = 10;
  const auto r = gmres(DenseMatrixOperator(n, diagonally_dominant(n, 2)), std::vector<double>(n, 1.0), {});
  std::stringstream ss;
  write_residual_csv(r.schedule, ss);
  std::string line;
  std::getline(ss, line);
  CHECK(line == "iter,rel_residual,p_used,eps_k,t_iter_seconds");
  int rows = 0;
  while (std::getline(ss, line)) ++rows;
  CHECK(rows == r.iterations);
}

TEST_CASE("relaxed and fixed solves of a small sphere problem agree") {
  const auto m = mesh::make_sphere(3);
  bem::OperatorConfig oc;
  oc.fmm.n_crit = 32;
  const auto op = bem::make_operator(m, bem::Formulation::Laplace1stKind, {}, oc);
  const auto b = bem::assemble_rhs(m, bem::Formulation::Laplace1stKind,
                                   bem::reference_boundary_data(m, bem::Formulation::Laplace1stKind, {}), {}, oc, 12);
  SolverConfig c;
  c.p_initial = 12;
  const auto relaxed = gmres(*op, b, c);
  c.relax = false;
  const auto fixed = gmres(*op, b, c);
  REQUIRE(relaxed.converged());
  REQUIRE(fixed.converged());
  CHECK(oracle::l2_rel(relaxed.x, fixed.x) <= 10 * c.tol);
  for (double v : fixed.x) CHECK(v == doctest::Approx(1.0).epsilon(0.1));
}

}
