#include <bemrelax/fmm.hpp>
#include <bemrelax/solver.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace bemrelax::solver {

void SolverConfig::validate() const {
  if (!(tol > 0 && tol < 1)) throw std::invalid_argument("solver tolerance must lie in (0, 1)");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (p_min < 0 || p_min > p_initial) throw std::invalid_argument("expansion orders must satisfy 0 <= p_min <= p_initial");
}

double relax_eps(double tol, double r_prev) { return std::min(tol / std::min(r_prev, 1.0), 1.0); }

int schedule_p(double eps, int p_min, int p_initial) {
  return std::clamp(fmm::required_p(eps), p_min, p_initial);
}

bool RelaxationSchedule::p_non_increasing() const {
  for (std::size_t k = 1; k < records.size(); ++k)
    if (records[k].p > records[k - 1].p) return false;
  return true;
}

int RelaxationSchedule::p_max() const {
  int p = 0;
  for (const auto& r : records) p = std::max(p, r.p);
  return p;
}

int RelaxationSchedule::p_last() const { return records.empty() ? 0 : records.back().p; }

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

GmresResult gmres(const LinearOperator& op, std::span<const double> b, const SolverConfig& cfg) {
  using clock = std::chrono::steady_clock;
  cfg.validate();
  const std::size_t n = op.size();
  if (b.size() != n) throw std::invalid_argument("gmres: right-hand side length does not match the operator");
  const double beta = std::sqrt(dot(b, b));
  if (beta == 0) throw std::invalid_argument("gmres: zero right-hand side");

  const auto t_start = clock::now();
  const int m = cfg.max_iters;
  std::vector<std::vector<double>> V;
  V.reserve(m + 1);
  V.emplace_back(b.begin(), b.end());
  for (double& v : V[0]) v /= beta;

  std::vector<std::vector<double>> H(m, std::vector<double>(m + 1, 0.0));  // column-major: H[k][i]
  std::vector<double> cs(m), sn(m), g(m + 1, 0.0);
  g[0] = beta;

  GmresResult res;
  double rel = 1.0;
  int k = 0;
  std::vector<double> w(n);
  for (; k < m; ++k) {
    const auto t0 = clock::now();
    IterationRecord rec;
    rec.k = k + 1;
    rec.r_prev = rel;
    rec.eps = relax_eps(cfg.tol, rel);
    rec.p = cfg.relax ? schedule_p(rec.eps, cfg.p_min, cfg.p_initial) : cfg.p_initial;
    if (!res.schedule.records.empty() && rec.p > res.schedule.records.back().p)
      throw std::logic_error("gmres: scheduled expansion order increased");

    op.apply(V[k], rec.p, w);
    auto& h = H[k];
    for (int i = 0; i <= k; ++i) {
      h[i] = dot(w, V[i]);
      for (std::size_t q = 0; q < n; ++q) w[q] -= h[i] * V[i][q];
    }
    const double hnext = std::sqrt(dot(w, w));
    h[k + 1] = hnext;

    for (int i = 0; i < k; ++i) {
      const double t = cs[i] * h[i] + sn[i] * h[i + 1];
      h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
      h[i] = t;
    }
    const double r = std::hypot(h[k], h[k + 1]);
    cs[k] = r == 0 ? 1.0 : h[k] / r;
    sn[k] = r == 0 ? 0.0 : h[k + 1] / r;
    h[k] = r;
    h[k + 1] = 0;
    g[k + 1] = -sn[k] * g[k];
    g[k] = cs[k] * g[k];
    rel = std::abs(g[k + 1]) / beta;

    rec.rel_residual = rel;
    rec.seconds = std::chrono::duration<double>(clock::now() - t0).count();
    res.schedule.records.push_back(rec);

    if (rel <= cfg.tol) {
      res.status = Status::Converged;
      ++k;
      break;
    }
    if (hnext <= 1e-14 * std::abs(r) || r == 0) {
      res.status = Status::Breakdown;
      res.diagnostic = "Arnoldi breakdown at iteration " + std::to_string(k + 1) + " with relative residual " +
                       std::to_string(rel);
      ++k;
      break;
    }
    V.emplace_back(n);
    for (std::size_t q = 0; q < n; ++q) V[k + 1][q] = w[q] / hnext;
  }
  if (res.status == Status::MaxIterations)
    res.diagnostic = "no convergence within " + std::to_string(m) + " iterations (relative residual " +
                     std::to_string(rel) + ")";

  // Back substitution on the triangular factor, then x = V y.
  std::vector<double> y(k, 0.0);
  for (int i = k - 1; i >= 0; --i) {
    double s = g[i];
    for (int j = i + 1; j < k; ++j) s -= H[j][i] * y[j];
    y[i] = H[i][i] == 0 ? 0.0 : s / H[i][i];
  }
  res.x.assign(n, 0.0);
  for (int j = 0; j < k; ++j)
    for (std::size_t q = 0; q < n; ++q) res.x[q] += y[j] * V[j][q];

  res.iterations = k;
  res.rel_residual = rel;
  res.seconds = std::chrono::duration<double>(clock::now() - t_start).count();
  return res;
}

void write_residual_csv(const RelaxationSchedule& s, std::ostream& out) {
  out << "iter,rel_residual,p_used,eps_k,t_iter_seconds\n";
  const auto old = out.precision(17);
  for (const auto& r : s.records)
    out << r.k << ',' << r.rel_residual << ',' << r.p << ',' << r.eps << ',' << r.seconds << '\n';
  out.precision(old);
}

}  // namespace bemrelax::solver
