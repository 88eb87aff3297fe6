#include <bemrelax/bem.hpp>

#include <algorithm>
#include <stdexcept>
#include <string>

namespace bemrelax::bem {

using kernels::KernelKind;

namespace {

//! acc += a x_j for one (i, j) entry; the single accumulation used by every product path.
inline void accumulate_entry(int dim, const double* a, const double* xj, double* acc) {
  if (dim == 1) {
    acc[0] += a[0] * xj[0];
    return;
  }
  for (int r = 0; r < 3; ++r) acc[r] += a[3 * r] * xj[0] + a[3 * r + 1] * xj[1] + a[3 * r + 2] * xj[2];
}

}  // namespace

LayerOperator::LayerOperator(mesh::TriMesh mesh, KernelKind kind, double scale, double diagonal, double normal_sign,
                             OperatorConfig cfg)
    : mesh_(std::move(mesh)),
      kind_(kind),
      scale_(scale),
      diagonal_(diagonal),
      normal_sign_(normal_sign),
      cfg_(cfg),
      dim_(kernels::value_dim(kind)) {
  const std::size_t n = mesh_.size();
  if (n == 0) throw std::invalid_argument("LayerOperator: empty mesh");
  quadrature::triangle_rule(cfg_.quad.far_points);  // validate both rules up front
  quadrature::triangle_rule(cfg_.quad.near_points);

  centroids_.resize(n);
  std::vector<double> extents(n), guards(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& panel = mesh_.panels()[j];
    centroids_[j] = panel.centroid;
    double e = 0;
    for (const Vec3& v : mesh_.corners(j)) e = std::max(e, norm(v - panel.centroid));
    extents[j] = e;
    guards[j] = quadrature::near_threshold(panel.area);
  }
  plan_ = std::make_unique<fmm::FmmPlan>(centroids_, centroids_, cfg_.fmm, extents, guards);

  const auto& rule = quadrature::triangle_rule(cfg_.quad.far_points);
  emitters_.expansions = dim_ == 1 ? 1 : 4;
  emitters_.offsets.resize(n + 1);
  for (std::size_t j = 0; j < n; ++j) {
    emitters_.offsets[j] = emitters_.positions.size();
    const auto tri = mesh_.corners(j);
    for (std::size_t k = 0; k < rule.size(); ++k) {
      emitters_.positions.push_back(quadrature::map_point(tri, rule.bary[k]));
      emit_weights_.push_back(rule.weights[k] * mesh_.panels()[j].area);
    }
  }
  emitters_.offsets[n] = emitters_.positions.size();

  // Near-field cache, laid out as CSR rows in target order.
  const auto& ttree = plan_->target_tree();
  std::vector<std::size_t> row_len(n, 0);
  for (int leaf : plan_->target_leaves()) {
    std::size_t len = 0;
    for (int sj : plan_->near_list(leaf)) len += plan_->source_tree().cells[sj].count();
    for (std::size_t t : ttree.bodies(ttree.cells[leaf])) row_len[t] = len;
  }
  std::size_t total = 0;
  for (std::size_t len : row_len) total += len;
  near_entries_ = total;
  const std::size_t bytes = total * (sizeof(std::size_t) + sizeof(double) * dim_ * dim_);
  if (total == 0 || bytes > cfg_.near_cache_budget) return;

  near_rows_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) near_rows_[i + 1] = near_rows_[i] + row_len[i];
  near_cols_.resize(total);
  near_vals_.resize(total * dim_ * dim_);
  const auto& leaves = plan_->target_leaves();
  const int nleaves = static_cast<int>(leaves.size());
  const std::size_t bs = static_cast<std::size_t>(dim_) * dim_;
#pragma omp parallel for num_threads(plan_->threads()) schedule(dynamic, 1)
  for (int li = 0; li < nleaves; ++li) {
    const auto near = plan_->near_sources(leaves[li]);
    for (std::size_t t : ttree.bodies(ttree.cells[leaves[li]])) {
      std::size_t pos = near_rows_[t];
      for (std::size_t j : near) {
        near_cols_[pos] = j;
        coefficient(t, j, &near_vals_[pos * bs]);
        ++pos;
      }
    }
  }
}

void LayerOperator::coefficient(std::size_t i, std::size_t j, double* a) const {
  const auto& panel = mesh_.panels()[j];
  const auto region = quadrature::classify(centroids_[i], panel, i == j);
  if (dim_ == 1) {
    double v = quadrature::integrate_panel_laplace(kind_, mesh_, j, centroids_[i], region, cfg_.quad);
    if (kind_ == KernelKind::LaplaceDouble) v *= normal_sign_;
    a[0] = scale_ * v;
    if (i == j) a[0] += diagonal_;
    return;
  }
  Mat3 m = quadrature::integrate_panel_stokes(kind_, mesh_, j, centroids_[i], region, cfg_.quad);
  if (kind_ == KernelKind::Stresslet) m *= normal_sign_;
  for (int k = 0; k < 9; ++k) a[k] = scale_ * m.a[k];
  if (i == j) {
    a[0] += diagonal_;
    a[4] += diagonal_;
    a[8] += diagonal_;
  }
}

void LayerOperator::apply(std::span<const double> x, int p, std::span<double> y) const {
  if (x.size() != size() || y.size() != size())
    throw std::invalid_argument("LayerOperator::apply: expected vectors of length " + std::to_string(size()));
  std::vector<double> far(size(), 0.0);
  apply_far(x, p, far);
  apply_near(x, y);
  for (std::size_t k = 0; k < size(); ++k) y[k] += far[k];
}

void LayerOperator::apply_near(std::span<const double> x, std::span<double> y) const {
  const int dim = dim_;
  const std::size_t bs = static_cast<std::size_t>(dim) * dim;
  if (near_cached()) {
    const long n = static_cast<long>(mesh_.size());
#pragma omp parallel for num_threads(plan_->threads()) schedule(static, 64)
    for (long i = 0; i < n; ++i) {
      double acc[3] = {0.0, 0.0, 0.0};
      for (std::size_t k = near_rows_[i]; k < near_rows_[i + 1]; ++k)
        accumulate_entry(dim, &near_vals_[k * bs], &x[near_cols_[k] * dim], acc);
      for (int r = 0; r < dim; ++r) y[i * dim + r] = acc[r];
    }
    return;
  }
  const auto& ttree = plan_->target_tree();
  const auto& leaves = plan_->target_leaves();
  const int nleaves = static_cast<int>(leaves.size());
#pragma omp parallel for num_threads(plan_->threads()) schedule(dynamic, 1)
  for (int li = 0; li < nleaves; ++li) {
    const auto near = plan_->near_sources(leaves[li]);
    double a[9];
    for (std::size_t t : ttree.bodies(ttree.cells[leaves[li]])) {
      double acc[3] = {0.0, 0.0, 0.0};
      for (std::size_t j : near) {
        coefficient(t, j, a);
        accumulate_entry(dim, a, &x[j * dim], acc);
      }
      for (int r = 0; r < dim; ++r) y[t * dim + r] = acc[r];
    }
  }
}

void LayerOperator::apply_far(std::span<const double> x, int p, std::span<double> y) const {
  const std::size_t n = mesh_.size();
  const std::size_t npts = emitters_.positions.size();
  const Vec3 origin = plan_->source_tree().cells[0].center;
  fmm::EmitterStrengths st;
  bool gradient = false;
  for (std::size_t j = 0; j < n; ++j) {
    const Vec3 nj = normal_sign_ * mesh_.panels()[j].normal;
    for (std::size_t k = emitters_.offsets[j]; k < emitters_.offsets[j + 1]; ++k) {
      const double w = emit_weights_[k];
      switch (kind_) {
        case KernelKind::LaplaceSingle:
          if (st.charges.empty()) st.charges.resize(npts);
          st.charges[k] = x[j] * w;
          break;
        case KernelKind::LaplaceDouble:
          if (st.dipoles.empty()) st.dipoles.resize(npts);
          st.dipoles[k] = (x[j] * w) * nj;
          break;
        case KernelKind::Stokeslet: {
          if (st.charges.empty()) st.charges.resize(4 * npts);
          const Vec3 f{x[3 * j] * w, x[3 * j + 1] * w, x[3 * j + 2] * w};
          for (int c = 0; c < 3; ++c) st.charges[4 * k + c] = f[c];
          st.charges[4 * k + 3] = dot(emitters_.positions[k] - origin, f);
          gradient = true;
          break;
        }
        case KernelKind::Stresslet: {
          if (st.dipoles.empty()) st.dipoles.resize(4 * npts);
          const Vec3 g{x[3 * j] * w, x[3 * j + 1] * w, x[3 * j + 2] * w};
          const Vec3 yk = emitters_.positions[k] - origin;
          for (int c = 0; c < 3; ++c) st.dipoles[4 * k + c] = g[c] * nj + nj[c] * g;
          st.dipoles[4 * k + 3] = dot(yk, g) * nj + dot(yk, nj) * g;
          gradient = true;
          break;
        }
      }
    }
  }

  std::vector<double> far;
  plan_->far_field(emitters_, st, p, gradient, far);
  const int E = emitters_.expansions;
  for (std::size_t t = 0; t < n; ++t) {
    const double* f = &far[t * E * 4];
    if (dim_ == 1) {
      y[t] = scale_ * (kernels::kInv4Pi * f[0]);
      continue;
    }
    const Vec3 xt = centroids_[t] - origin;
    for (int i = 0; i < 3; ++i) {
      double u = f[4 * i] + f[4 * 3 + 1 + i];
      for (int k = 0; k < 3; ++k) u -= xt[k] * f[4 * k + 1 + i];
      y[3 * t + i] = scale_ * u;
    }
  }
}

std::vector<double> LayerOperator::dense_apply(std::span<const double> x) const {
  if (mesh_.size() > kDenseLimit)
    throw std::length_error("dense_apply: " + std::to_string(mesh_.size()) + " panels exceed the limit of " +
                            std::to_string(kDenseLimit));
  if (x.size() != size()) throw std::invalid_argument("dense_apply: dimension mismatch");
  const int dim = dim_;
  const long n = static_cast<long>(mesh_.size());
  std::vector<double> y(size(), 0.0);
#pragma omp parallel for num_threads(plan_->threads()) schedule(dynamic, 16)
  for (long i = 0; i < n; ++i) {
    double a[9];
    double acc[3] = {0.0, 0.0, 0.0};
    for (long j = 0; j < n; ++j) {
      coefficient(i, j, a);
      accumulate_entry(dim, a, &x[j * dim], acc);
    }
    for (int r = 0; r < dim; ++r) y[i * dim + r] = acc[r];
  }
  return y;
}

}  // namespace bemrelax::bem
