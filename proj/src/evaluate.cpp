#include <bemrelax/fmm.hpp>

#include <stdexcept>
#include <string>

namespace bemrelax::fmm {

using kernels::KernelKind;

std::vector<double> evaluate(KernelKind kind, const kernels::SourceSet& sources, std::span<const Vec3> targets,
                             int p, const FmmParams& params) {
  kernels::check_sources(kind, sources);
  const int dim = kernels::value_dim(kind);
  std::vector<double> out(dim * targets.size(), 0.0);
  if (targets.empty() || sources.size() == 0) return out;

  FmmPlan plan(targets, sources.positions, params);
  const bool normal = kernels::needs_normal(kind);

  // Near field: direct sum in ascending source order per target.
  const auto& leaves = plan.target_leaves();
  const int nleaves = static_cast<int>(leaves.size());
  int error_target = -1, error_source = -1;
#pragma omp parallel for num_threads(plan.threads()) schedule(dynamic, 1)
  for (int li = 0; li < nleaves; ++li) {
    const int leaf = leaves[li];
    const auto near = plan.near_sources(leaf);
    for (std::size_t t : plan.target_tree().bodies(plan.target_tree().cells[leaf])) {
      for (std::size_t j : near) {
        Vec3 r = targets[t] - sources.positions[j];
        if (norm2(r) == 0.0) {
#pragma omp critical(bemrelax_evaluate_error)
          {
            error_target = static_cast<int>(t);
            error_source = static_cast<int>(j);
          }
          continue;
        }
        kernels::accumulate(kind, r, normal ? &sources.normals[j] : nullptr, &sources.strengths[dim * j],
                            &out[dim * t]);
      }
    }
  }
  if (error_target >= 0)
    throw std::domain_error("evaluate: target " + std::to_string(error_target) + " coincides with source " +
                            std::to_string(error_source));

  // Far field through harmonic expansions.
  const std::size_t n = sources.size();
  Emitters em;
  em.positions = sources.positions;
  em.offsets.resize(n + 1);
  for (std::size_t j = 0; j <= n; ++j) em.offsets[j] = j;
  EmitterStrengths st;
  const Vec3 origin = plan.source_tree().cells[0].center;
  bool gradient = false;
  switch (kind) {
    case KernelKind::LaplaceSingle:
      st.charges = sources.strengths;
      break;
    case KernelKind::LaplaceDouble:
      st.dipoles.resize(n);
      for (std::size_t j = 0; j < n; ++j) st.dipoles[j] = sources.strengths[j] * sources.normals[j];
      break;
    case KernelKind::Stokeslet:
      // G f = f/r + r (r.f)/r^3 = phi_i - x_k d_i phi_k + d_i phi_3 with charges f_k and y.f
      em.expansions = 4;
      gradient = true;
      st.charges.resize(4 * n);
      for (std::size_t j = 0; j < n; ++j) {
        const Vec3 f{sources.strengths[3 * j], sources.strengths[3 * j + 1], sources.strengths[3 * j + 2]};
        for (int k = 0; k < 3; ++k) st.charges[4 * j + k] = f[k];
        st.charges[4 * j + 3] = dot(sources.positions[j] - origin, f);
      }
      break;
    case KernelKind::Stresslet:
      // Same combination with dipoles g_k n + n_k g and (y.g) n + (y.n) g
      em.expansions = 4;
      gradient = true;
      st.dipoles.resize(4 * n);
      for (std::size_t j = 0; j < n; ++j) {
        const Vec3 g{sources.strengths[3 * j], sources.strengths[3 * j + 1], sources.strengths[3 * j + 2]};
        const Vec3& nn = sources.normals[j];
        const Vec3 y = sources.positions[j] - origin;
        for (int k = 0; k < 3; ++k) st.dipoles[4 * j + k] = g[k] * nn + nn[k] * g;
        st.dipoles[4 * j + 3] = dot(y, g) * nn + dot(y, nn) * g;
      }
      break;
  }

  std::vector<double> far;
  plan.far_field(em, st, p, gradient, far);
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const double* f = &far[t * em.expansions * 4];
    if (dim == 1) {
      out[t] += kernels::kInv4Pi * f[0];
      continue;
    }
    const Vec3 x = targets[t] - origin;
    for (int i = 0; i < 3; ++i) {
      double u = f[4 * i] + f[4 * 3 + 1 + i];
      for (int k = 0; k < 3; ++k) u -= x[k] * f[4 * k + 1 + i];
      out[3 * t + i] += u;
    }
  }
  return out;
}

}  // namespace bemrelax::fmm
