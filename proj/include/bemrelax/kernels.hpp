#pragma once

/** @file kernels.hpp
 * @brief Free-space Green's functions for Laplace and Stokes, and the direct N-body sum
 *
 * Laplace kernels carry the 1/(4 pi) of G = 1/(4 pi r). Stokes kernels are prefactor-free;
 * the 1/(8 pi mu) and 1/(8 pi) factors are applied by the operator layer.
 * All kernels take r = x_t - x_s (target minus source).
 */

#include <bemrelax/vec3.hpp>

#include <span>
#include <string_view>
#include <vector>

namespace bemrelax::kernels {

enum class KernelKind { LaplaceSingle, LaplaceDouble, Stokeslet, Stresslet };

constexpr int value_dim(KernelKind k) {
  return (k == KernelKind::LaplaceSingle || k == KernelKind::LaplaceDouble) ? 1 : 3;
}
constexpr bool needs_normal(KernelKind k) {
  return k == KernelKind::LaplaceDouble || k == KernelKind::Stresslet;
}
std::string_view name(KernelKind k);

inline constexpr double kInv4Pi = 1.0 / (4.0 * kPi);

// Unchecked forms on the separation vector r = x_t - x_s; callers guarantee r != 0.

inline double laplace_single_r(const Vec3& r) { return kInv4Pi / norm(r); }

inline double laplace_double_r(const Vec3& r, const Vec3& n) {
  double r2 = norm2(r);
  return kInv4Pi * dot(r, n) / (r2 * std::sqrt(r2));
}

inline Mat3 stokeslet_r(const Vec3& r) {
  double r2 = norm2(r);
  double inv = 1.0 / std::sqrt(r2);
  double inv3 = inv / r2;
  Mat3 g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = r[i] * r[j] * inv3;
  g(0, 0) += inv;
  g(1, 1) += inv;
  g(2, 2) += inv;
  return g;
}

inline Mat3 stresslet_r(const Vec3& r, const Vec3& n) {
  double r2 = norm2(r);
  double inv5 = 1.0 / (r2 * r2 * std::sqrt(r2));
  double s = 6.0 * dot(r, n) * inv5;
  Mat3 t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t(i, j) = s * r[i] * r[j];
  return t;
}

//! out += K(r) m for one source; the single code path shared by every direct summation.
inline void accumulate(KernelKind kind, const Vec3& r, const Vec3* n, const double* m, double* out) {
  switch (kind) {
    case KernelKind::LaplaceSingle: out[0] += laplace_single_r(r) * m[0]; return;
    case KernelKind::LaplaceDouble: out[0] += laplace_double_r(r, *n) * m[0]; return;
    case KernelKind::Stokeslet:
    case KernelKind::Stresslet: {
      Mat3 k = kind == KernelKind::Stokeslet ? stokeslet_r(r) : stresslet_r(r, *n);
      Vec3 u = k * Vec3{m[0], m[1], m[2]};
      out[0] += u.x;
      out[1] += u.y;
      out[2] += u.z;
      return;
    }
  }
}

// Checked forms; throw std::domain_error when x_t == x_s.

double laplace_single(const Vec3& xt, const Vec3& xs);
double laplace_double(const Vec3& xt, const Vec3& xs, const Vec3& ns);
Mat3 stokeslet(const Vec3& xt, const Vec3& xs);
Mat3 stresslet_contracted(const Vec3& xt, const Vec3& xs, const Vec3& ns);

//! Point sources: one scalar (Laplace) or 3-vector (Stokes) strength each, plus normals for
//! double-layer kernels.
struct SourceSet {
  std::vector<Vec3> positions;
  std::vector<double> strengths;  // value_dim(kind) per source
  std::vector<Vec3> normals;      // empty unless needs_normal(kind)

  std::size_t size() const { return positions.size(); }
};

//! Throws std::invalid_argument when strengths/normals do not match the kernel.
void check_sources(KernelKind kind, const SourceSet& sources);

//! phi_i = sum_j K(x_i, y_j) m_j, summed in ascending source order. Result has value_dim(kind)
//! entries per target. Throws std::domain_error naming the pair if a target hits a source.
std::vector<double> direct_sum(KernelKind kind, const SourceSet& sources, std::span<const Vec3> targets);

}  // namespace bemrelax::kernels
