#pragma once

/** @file quadrature.hpp
 * @brief Panel integration of Laplace and Stokes kernels
 *
 * Three regimes, selected per (target, panel) pair:
 *  - Far: low-order symmetric Gauss rule (default 4 points)
 *  - NearSingular: target closer than 2*sqrt(2 S_j) to the panel centroid, high-order rule (default 19 points)
 *  - Singular: target is the panel's own collocation point; radial part integrated analytically in
 *    polar coordinates about the target, angular part by adaptive Gauss-Legendre.
 */

#include <bemrelax/kernels.hpp>
#include <bemrelax/mesh.hpp>
#include <bemrelax/vec3.hpp>

#include <array>
#include <vector>

namespace bemrelax::quadrature {

//! Symmetric rule on the reference triangle; weights are area-normalized (sum to 1).
struct TriangleRule {
  std::vector<std::array<double, 3>> bary;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return weights.size(); }
};

//! Supported sizes: 1, 3, 4, 7, 19. Throws std::invalid_argument otherwise.
const TriangleRule& triangle_rule(int points);

struct QuadratureConfig {
  int far_points = 4;
  int near_points = 19;
};

enum class Region { Far, NearSingular, Singular };

inline double near_threshold(double area) { return 2.0 * std::sqrt(2.0 * area); }

//! Distance is measured from the target to the panel centroid.
inline Region classify(const Vec3& target, const mesh::Panel& panel, bool own) {
  if (own) return Region::Singular;
  double t = near_threshold(panel.area);
  return norm2(target - panel.centroid) < t * t ? Region::NearSingular : Region::Far;
}

using Triangle = std::array<Vec3, 3>;

inline Vec3 map_point(const Triangle& tri, const std::array<double, 3>& b) {
  return b[0] * tri[0] + b[1] * tri[1] + b[2] * tri[2];
}

//! sum_k q_k S f(x_k) over the mapped rule points; f returns double or Mat3.
template <class F>
auto integrate(const Triangle& tri, double area, const TriangleRule& rule, F&& f) {
  using R = decltype(f(Vec3{}));
  R acc{};
  for (std::size_t k = 0; k < rule.size(); ++k) acc += f(map_point(tri, rule.bary[k])) * (rule.weights[k] * area);
  return acc;
}

//! Regular panel integral of a Laplace kernel (LaplaceSingle or LaplaceDouble) with the given rule.
double integrate_laplace(kernels::KernelKind kind, const Triangle& tri, const Vec3& normal, double area,
                         const Vec3& target, const TriangleRule& rule);

//! Regular panel integral of a Stokes kernel (Stokeslet or Stresslet) with the given rule.
Mat3 integrate_stokes(kernels::KernelKind kind, const Triangle& tri, const Vec3& normal, double area,
                      const Vec3& target, const TriangleRule& rule);

//! Singular self-integral of 1/(4 pi r) (single layer) or its normal derivative over a flat panel,
//! for a point inside the panel. The double layer vanishes for in-plane points.
//! Throws std::invalid_argument for degenerate triangles.
double integrate_singular_laplace(kernels::KernelKind kind, const Triangle& tri, const Vec3& point);

//! Singular self-integral of the stokeslet over a flat panel; the stresslet self-term is the zero block.
Mat3 integrate_singular_stokes(kernels::KernelKind kind, const Triangle& tri, const Vec3& point);

//! Region-dispatched panel integral, the entry used by operator assembly.
double integrate_panel_laplace(kernels::KernelKind kind, const mesh::TriMesh& mesh, std::size_t panel,
                               const Vec3& target, Region region, const QuadratureConfig& cfg);
Mat3 integrate_panel_stokes(kernels::KernelKind kind, const mesh::TriMesh& mesh, std::size_t panel,
                            const Vec3& target, Region region, const QuadratureConfig& cfg);

}  // namespace bemrelax::quadrature
