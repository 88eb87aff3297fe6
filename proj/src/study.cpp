#include <bemrelax/fmm.hpp>
#include <bemrelax/study.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace bemrelax::study {

double observed_order(double f1, double f2, double f3, double c) {
  if (!(c > 1)) throw std::domain_error("observed_order: refinement ratio must exceed 1");
  const double ratio = (f2 - f1) / (f3 - f2);
  if (!(ratio > 0) || !std::isfinite(ratio))
    throw std::domain_error("observed_order: sequence is not monotone");
  return std::log(ratio) / std::log(c);
}

double richardson(double f1, double f2, double f3) {
  const double den = f1 - 2 * f2 + f3;
  if (den == 0) throw std::domain_error("richardson: second difference vanishes");
  return (f1 * f3 - f2 * f2) / den;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 matching points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

mesh::TriMesh build_geometry(const ProblemSpec& spec, int level) {
  mesh::TriMesh cell = spec.geometry == Geometry::Sphere ? mesh::make_sphere(level, spec.physics.radius)
                                                         : mesh::rbc_transform(mesh::make_sphere(level, 1.0)).mesh;
  if (spec.cells == 1) return cell;
  return mesh::make_scene(cell, spec.cells, spec.seed);
}

SolveOutcome solve(const mesh::TriMesh& mesh, const ProblemSpec& spec, const SolveParams& params) {
  using clock = std::chrono::steady_clock;
  if (params.repeats < 1) throw std::invalid_argument("solve: repeats must be >= 1");
  SolveOutcome o;
  o.panels = mesh.size();
  const auto t0 = clock::now();
  auto op = bem::make_operator(mesh, spec.formulation, spec.physics, params.op);
  const auto data = bem::reference_boundary_data(mesh, spec.formulation, spec.physics);
  const auto rhs = bem::assemble_rhs(mesh, spec.formulation, data, spec.physics, params.op, params.solver.p_initial);
  o.setup_seconds = std::chrono::duration<double>(clock::now() - t0).count();

  for (int r = 0; r < params.repeats; ++r) {
    o.result = solver::gmres(*op, rhs, params.solver);
    o.solve_seconds.push_back(o.result.seconds);
  }

  const auto& x = o.result.x;
  if (spec.formulation == bem::Formulation::StokesTraction1stKind) {
    o.value = bem::drag_force(mesh, x).x;
    if (spec.geometry == Geometry::Sphere && spec.cells == 1) {
      const double exact = bem::analytic_sphere_drag(spec.physics);
      o.error = std::abs(std::abs(o.value) - exact) / exact;
    }
  } else {
    double s = 0;
    for (double v : x) s += (v - 1.0) * (v - 1.0);
    o.error = std::sqrt(s / static_cast<double>(x.size()));
    o.value = o.error;
  }
  return o;
}

RunRecord make_record(const std::string& label, const SolveOutcome& o, const SolveParams& params) {
  RunRecord r;
  r.label = label;
  r.panels = o.panels;
  r.n_crit = params.op.fmm.n_crit;
  r.p_initial = params.solver.p_initial;
  r.p_min = params.solver.p_min;
  r.relax = params.solver.relax;
  r.tol = params.solver.tol;
  r.iterations = o.result.iterations;
  r.converged = o.result.converged();
  r.repeats = static_cast<int>(o.solve_seconds.size());
  r.seconds_mean = std::accumulate(o.solve_seconds.begin(), o.solve_seconds.end(), 0.0) / r.repeats;
  r.seconds_min = *std::min_element(o.solve_seconds.begin(), o.solve_seconds.end());
  r.seconds_max = *std::max_element(o.solve_seconds.begin(), o.solve_seconds.end());
  r.error = o.error;
  r.value = o.value;
  return r;
}

StudyReport run_convergence(const ProblemSpec& spec, const std::vector<int>& levels, const SolveParams& params) {
  if (levels.size() < 3) throw std::invalid_argument("run_convergence: need at least three mesh levels");
  StudyReport rep;
  rep.kind = "convergence";
  rep.notes["problem"] = std::string(bem::name(spec.formulation));
  rep.notes["geometry"] = spec.geometry == Geometry::Sphere ? "sphere" : "rbc";
  bool all_converged = true;
  for (int level : levels) {
    const auto m = build_geometry(spec, level);
    const auto o = solve(m, spec, params);
    all_converged = all_converged && o.result.converged();
    rep.runs.push_back(make_record("level=" + std::to_string(level), o, params));
  }
  rep.derived["all_converged"] = all_converged ? 1 : 0;

  const std::size_t n = rep.runs.size();
  const std::size_t first = n >= 5 ? n / 2 - 1 : n - 3;
  rep.derived["order_first_level_index"] = static_cast<double>(first);
  const bool extrapolate = spec.geometry != Geometry::Sphere || spec.cells != 1;
  try {
    if (extrapolate) {
      const double f1 = rep.runs[first].value, f2 = rep.runs[first + 1].value, f3 = rep.runs[first + 2].value;
      const double limit = richardson(f1, f2, f3);
      rep.derived["extrapolated"] = limit;
      rep.derived["order"] = observed_order(f1, f2, f3, 4.0);
      for (auto& r : rep.runs) r.error = std::abs(r.value - limit) / std::abs(limit);
    } else {
      rep.derived["order"] =
          observed_order(rep.runs[first].error, rep.runs[first + 1].error, rep.runs[first + 2].error, 4.0);
    }
  } catch (const std::domain_error& e) {
    rep.notes["order_error"] = e.what();
  }
  std::vector<double> ns, errs;
  for (const auto& r : rep.runs)
    if (r.error > 0) {
      ns.push_back(static_cast<double>(r.panels));
      errs.push_back(r.error);
    }
  if (ns.size() >= 2) rep.derived["error_slope_vs_panels"] = loglog_slope(ns, errs);
  return rep;
}

StudyReport run_relaxation_comparison(const ProblemSpec& spec, int level, const SolveParams& params,
                                      const std::vector<int>& ncrit_candidates) {
  if (ncrit_candidates.empty()) throw std::invalid_argument("run_relaxation_comparison: no n_crit candidates");
  StudyReport rep;
  rep.kind = "relaxation";
  rep.notes["problem"] = std::string(bem::name(spec.formulation));
  const auto m = build_geometry(spec, level);

  std::vector<double> best_x[2];
  double best_t[2] = {0, 0};
  for (int variant = 0; variant < 2; ++variant) {
    const bool relax = variant == 1;
    const std::string tag = relax ? "relaxed" : "fixed";
    int best_index = -1;
    for (int nc : ncrit_candidates) {
      SolveParams sp = params;
      sp.solver.relax = relax;
      sp.op.fmm.n_crit = nc;
      const auto o = solve(m, spec, sp);
      auto rec = make_record(tag + " ncrit=" + std::to_string(nc), o, sp);
      rep.runs.push_back(rec);
      if (best_index < 0 || rec.seconds_mean < best_t[variant]) {
        best_index = static_cast<int>(rep.runs.size()) - 1;
        best_t[variant] = rec.seconds_mean;
        best_x[variant] = o.result.x;
      }
    }
    const auto& b = rep.runs[best_index];
    rep.derived["best_ncrit_" + tag] = b.n_crit;
    rep.derived["seconds_" + tag] = b.seconds_mean;
    rep.derived["iterations_" + tag] = b.iterations;
    rep.derived["converged_" + tag] = b.converged ? 1 : 0;
    rep.derived["error_" + tag] = b.error;
    rep.derived["value_" + tag] = b.value;
  }
  rep.derived["speedup"] = best_t[0] / best_t[1];
  double num = 0, den = 0;
  for (std::size_t i = 0; i < best_x[0].size(); ++i) {
    num += (best_x[1][i] - best_x[0][i]) * (best_x[1][i] - best_x[0][i]);
    den += best_x[0][i] * best_x[0][i];
  }
  rep.derived["solution_difference"] = std::sqrt(num / den);
  return rep;
}

StudyReport run_scaling(const std::vector<std::size_t>& sizes, int p, int n_crit, std::uint64_t seed, int repeats,
                        int threads) {
  using clock = std::chrono::steady_clock;
  if (repeats < 1) throw std::invalid_argument("run_scaling: repeats must be >= 1");
  StudyReport rep;
  rep.kind = "scaling";
  rep.notes["kernel"] = "laplace-single";
  std::vector<double> ns, ts;
  for (std::size_t n : sizes) {
    std::mt19937_64 gen(seed + n);
    auto u01 = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    kernels::SourceSet src;
    std::vector<Vec3> targets(n);
    src.positions.resize(n);
    src.strengths.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      src.positions[i] = {u01(), u01(), u01()};
      src.strengths[i] = 2 * u01() - 1;
    }
    for (auto& t : targets) t = {u01(), u01(), u01()};

    fmm::FmmParams fp;
    fp.n_crit = n_crit;
    fp.threads = threads;
    std::vector<double> times;
    for (int r = 0; r < repeats; ++r) {
      const auto t0 = clock::now();
      auto out = fmm::evaluate(kernels::KernelKind::LaplaceSingle, src, targets, p, fp);
      times.push_back(std::chrono::duration<double>(clock::now() - t0).count());
    }
    RunRecord rec;
    rec.label = "n=" + std::to_string(n);
    rec.panels = n;
    rec.n_crit = n_crit;
    rec.p_initial = p;
    rec.p_min = p;
    rec.repeats = repeats;
    rec.seconds_mean = std::accumulate(times.begin(), times.end(), 0.0) / repeats;
    rec.seconds_min = *std::min_element(times.begin(), times.end());
    rec.seconds_max = *std::max_element(times.begin(), times.end());
    const auto counts = fmm::FmmPlan(targets, src.positions, fp).counts();
    rec.value = static_cast<double>(counts.near_interactions);
    rep.runs.push_back(rec);
    ns.push_back(static_cast<double>(n));
    ts.push_back(rec.seconds_mean);
  }
  if (ns.size() >= 2) rep.derived["slope"] = loglog_slope(ns, ts);
  return rep;
}

}  // namespace bemrelax::study
