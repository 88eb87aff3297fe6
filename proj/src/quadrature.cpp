#include <bemrelax/quadrature.hpp>

#include <stdexcept>
#include <string>

namespace bemrelax::quadrature {

namespace {

void add_centroid(TriangleRule& r, double w) {
  r.bary.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3});
  r.weights.push_back(w);
}

void add_orbit3(TriangleRule& r, double a, double w) {
  double b = 0.5 * (1.0 - a);
  r.bary.push_back({a, b, b});
  r.bary.push_back({b, a, b});
  r.bary.push_back({b, b, a});
  for (int k = 0; k < 3; ++k) r.weights.push_back(w);
}

void add_orbit6(TriangleRule& r, double a, double b, double w) {
  double c = 1.0 - a - b;
  for (auto p : {std::array{a, b, c}, std::array{a, c, b}, std::array{b, a, c}, std::array{b, c, a},
                 std::array{c, a, b}, std::array{c, b, a}}) {
    r.bary.push_back(p);
    r.weights.push_back(w);
  }
}

TriangleRule make_rule(int points) {
  TriangleRule r;
  switch (points) {
    case 1:
      r.degree = 1;
      add_centroid(r, 1.0);
      break;
    case 3:
      r.degree = 2;
      add_orbit3(r, 2.0 / 3, 1.0 / 3);
      break;
    case 4:
      r.degree = 3;
      add_centroid(r, -27.0 / 48);
      add_orbit3(r, 0.6, 25.0 / 48);
      break;
    case 7: {
      r.degree = 5;
      const double s = std::sqrt(15.0);
      add_centroid(r, 9.0 / 40);
      add_orbit3(r, 1.0 - 2.0 * (6.0 - s) / 21, (155.0 - s) / 1200);
      add_orbit3(r, 1.0 - 2.0 * (6.0 + s) / 21, (155.0 + s) / 1200);
      break;
    }
    case 19:
      // Dunavant degree-9 rule, coordinates refined to full double precision.
      r.degree = 9;
      add_centroid(r, 0.097135796282798833819);
      add_orbit3(r, 0.020634961602524744433, 0.031334700227139070537);
      add_orbit3(r, 0.12582081701412672546, 0.077827541004774279317);
      add_orbit3(r, 0.62359292876193453952, 0.079647738927210253033);
      add_orbit3(r, 0.91054097321109458027, 0.025577675658698031262);
      add_orbit6(r, 0.036838412054736283635, 0.22196298916076569568, 0.043283539377289377289);
      break;
    default:
      throw std::invalid_argument("no symmetric triangle rule with " + std::to_string(points) +
                                  " points (supported: 1, 3, 4, 7, 19)");
  }
  return r;
}

}  // namespace

const TriangleRule& triangle_rule(int points) {
  static const TriangleRule r1 = make_rule(1), r3 = make_rule(3), r4 = make_rule(4), r7 = make_rule(7),
                            r19 = make_rule(19);
  switch (points) {
    case 1: return r1;
    case 3: return r3;
    case 4: return r4;
    case 7: return r7;
    case 19: return r19;
    default: make_rule(points);  // throws
  }
  return r1;
}

double integrate_laplace(kernels::KernelKind kind, const Triangle& tri, const Vec3& normal, double area,
                         const Vec3& target, const TriangleRule& rule) {
  if (kind == kernels::KernelKind::LaplaceSingle)
    return integrate(tri, area, rule, [&](const Vec3& y) { return kernels::laplace_single_r(target - y); });
  return integrate(tri, area, rule, [&](const Vec3& y) { return kernels::laplace_double_r(target - y, normal); });
}

Mat3 integrate_stokes(kernels::KernelKind kind, const Triangle& tri, const Vec3& normal, double area,
                      const Vec3& target, const TriangleRule& rule) {
  if (kind == kernels::KernelKind::Stokeslet)
    return integrate(tri, area, rule, [&](const Vec3& y) { return kernels::stokeslet_r(target - y); });
  return integrate(tri, area, rule, [&](const Vec3& y) { return kernels::stresslet_r(target - y, normal); });
}

double integrate_panel_laplace(kernels::KernelKind kind, const mesh::TriMesh& mesh, std::size_t panel,
                               const Vec3& target, Region region, const QuadratureConfig& cfg) {
  const auto& p = mesh.panels()[panel];
  auto tri = mesh.corners(panel);
  switch (region) {
    case Region::Singular: return integrate_singular_laplace(kind, tri, target);
    case Region::NearSingular:
      return integrate_laplace(kind, tri, p.normal, p.area, target, triangle_rule(cfg.near_points));
    case Region::Far: break;
  }
  return integrate_laplace(kind, tri, p.normal, p.area, target, triangle_rule(cfg.far_points));
}

Mat3 integrate_panel_stokes(kernels::KernelKind kind, const mesh::TriMesh& mesh, std::size_t panel,
                            const Vec3& target, Region region, const QuadratureConfig& cfg) {
  const auto& p = mesh.panels()[panel];
  auto tri = mesh.corners(panel);
  switch (region) {
    case Region::Singular: return integrate_singular_stokes(kind, tri, target);
    case Region::NearSingular:
      return integrate_stokes(kind, tri, p.normal, p.area, target, triangle_rule(cfg.near_points));
    case Region::Far: break;
  }
  return integrate_stokes(kind, tri, p.normal, p.area, target, triangle_rule(cfg.far_points));
}

}  // namespace bemrelax::quadrature
