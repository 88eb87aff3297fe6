#include <bemrelax/kernels.hpp>

#include <stdexcept>
#include <string>

namespace bemrelax::kernels {

std::string_view name(KernelKind k) {
  switch (k) {
    case KernelKind::LaplaceSingle: return "laplace-single";
    case KernelKind::LaplaceDouble: return "laplace-double";
    case KernelKind::Stokeslet: return "stokeslet";
    case KernelKind::Stresslet: return "stresslet";
  }
  return "?";
}

namespace {

Vec3 separation(const Vec3& xt, const Vec3& xs) {
  Vec3 r = xt - xs;
  if (norm2(r) == 0.0) throw std::domain_error("kernel evaluated at coincident points");
  return r;
}

}  // namespace

double laplace_single(const Vec3& xt, const Vec3& xs) { return laplace_single_r(separation(xt, xs)); }

double laplace_double(const Vec3& xt, const Vec3& xs, const Vec3& ns) {
  return laplace_double_r(separation(xt, xs), ns);
}

Mat3 stokeslet(const Vec3& xt, const Vec3& xs) { return stokeslet_r(separation(xt, xs)); }

Mat3 stresslet_contracted(const Vec3& xt, const Vec3& xs, const Vec3& ns) {
  return stresslet_r(separation(xt, xs), ns);
}

void check_sources(KernelKind kind, const SourceSet& s) {
  const std::size_t dim = value_dim(kind);
  if (s.strengths.size() != dim * s.positions.size())
    throw std::invalid_argument("source strengths must have " + std::to_string(dim) + " entries per source");
  if (needs_normal(kind) ? s.normals.size() != s.positions.size() : !s.normals.empty())
    throw std::invalid_argument(std::string("normals must be given exactly for double-layer kernels (") +
                                std::string(name(kind)) + ")");
}

std::vector<double> direct_sum(KernelKind kind, const SourceSet& sources, std::span<const Vec3> targets) {
  check_sources(kind, sources);
  const int dim = value_dim(kind);
  const std::size_t ns = sources.size();
  std::vector<double> out(dim * targets.size(), 0.0);

  for (std::size_t i = 0; i < targets.size(); ++i) {
    for (std::size_t j = 0; j < ns; ++j) {
      Vec3 r = targets[i] - sources.positions[j];
      if (norm2(r) == 0.0)
        throw std::domain_error("direct_sum: target " + std::to_string(i) + " coincides with source " +
                                std::to_string(j));
      const Vec3* n = needs_normal(kind) ? &sources.normals[j] : nullptr;
      accumulate(kind, r, n, &sources.strengths[dim * j], &out[dim * i]);
    }
  }
  return out;
}

}  // namespace bemrelax::kernels
