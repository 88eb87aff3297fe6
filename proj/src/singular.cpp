#include <bemrelax/quadrature.hpp>

#include <algorithm>
#include <stdexcept>

namespace bemrelax::quadrature {

namespace {

// 16-point Gauss-Legendre on [-1, 1], positive half.
constexpr double kGlX[8] = {0.0950125098376374401853, 0.2816035507792589132305, 0.4580167776572273863424,
                            0.6178762444026437484467, 0.7554044083550030338951, 0.8656312023878317438805,
                            0.9445750230732325760779, 0.9894009349916499325962};
constexpr double kGlW[8] = {0.1894506104550684962854, 0.1826034150449235888668, 0.1691565193950025381893,
                            0.1495959888165767320815, 0.1246289712555338720525, 0.0951585116824927848099,
                            0.0622535239386478928628, 0.0271524594117540948518};

template <class F>
auto gauss16(F& f, double a, double b) {
  using R = decltype(f(0.0));
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  R acc{};
  for (int k = 0; k < 8; ++k) {
    acc += (f(c - h * kGlX[k]) + f(c + h * kGlX[k])) * (kGlW[k] * h);
  }
  return acc;
}

double magnitude(double v) { return std::abs(v); }
double magnitude(const Mat3& m) { return frobenius(m); }

//! Adaptive bisection; accepts when the two-half estimate agrees with the whole.
template <class F>
auto adaptive(F& f, double a, double b, double tol, int depth) {
  auto whole = gauss16(f, a, b);
  double m = 0.5 * (a + b);
  auto left = gauss16(f, a, m);
  auto right = gauss16(f, m, b);
  auto sum = left + right;
  auto diff = sum + whole * -1.0;
  if (depth <= 0 || magnitude(diff) <= tol) return sum;
  return adaptive(f, a, m, tol, depth - 1) + adaptive(f, m, b, tol, depth - 1);
}

//! Sum over the three sub-triangles (point, A, B) of int_{phiA}^{phiB} g(R(phi), d(phi)) dphi,
//! where d is the in-plane unit direction and R the distance from the point to edge AB.
template <class G>
auto polar_sum(const Triangle& tri, const Vec3& point, G&& g) {
  using R = decltype(g(1.0, Vec3{}));
  const double scale = std::max({norm(tri[1] - tri[0]), norm(tri[2] - tri[1]), norm(tri[0] - tri[2])});
  if (norm(cross(tri[1] - tri[0], tri[2] - tri[0])) <= 1e-14 * scale * scale)
    throw std::invalid_argument("singular integral over a degenerate panel");
  R total{};
  for (int e = 0; e < 3; ++e) {
    const Vec3& a = tri[e];
    const Vec3& b = tri[(e + 1) % 3];
    Vec3 t = normalized(b - a);
    Vec3 foot = a + dot(point - a, t) * t;
    Vec3 to_edge = foot - point;
    double h = norm(to_edge);
    if (h <= 1e-14 * scale) continue;  // point lies on this edge: zero-area sub-triangle
    Vec3 u = to_edge / h;
    double pa = std::atan2(dot(a - foot, t), h);
    double pb = std::atan2(dot(b - foot, t), h);
    auto f = [&](double phi) {
      double c = std::cos(phi);
      return g(h / c, c * u + std::sin(phi) * t);
    };
    R tol_probe = gauss16(f, pa, pb);
    double tol = 1e-13 * std::max(magnitude(tol_probe), 1e-300);
    total += adaptive(f, pa, pb, tol, 16);
  }
  return total;
}

}  // namespace

double integrate_singular_laplace(kernels::KernelKind kind, const Triangle& tri, const Vec3& point) {
  if (kind == kernels::KernelKind::LaplaceDouble) {
    polar_sum(tri, point, [](double, const Vec3&) { return 0.0; });  // validates the panel
    return 0.0;
  }
  if (kind != kernels::KernelKind::LaplaceSingle)
    throw std::invalid_argument("integrate_singular_laplace: not a Laplace kernel");
  // int 1/(4 pi r) r dr dphi = (1/4pi) int R(phi) dphi
  return kernels::kInv4Pi * polar_sum(tri, point, [](double r, const Vec3&) { return r; });
}

Mat3 integrate_singular_stokes(kernels::KernelKind kind, const Triangle& tri, const Vec3& point) {
  if (kind == kernels::KernelKind::Stresslet) {
    polar_sum(tri, point, [](double, const Vec3&) { return 0.0; });
    return Mat3{};
  }
  if (kind != kernels::KernelKind::Stokeslet)
    throw std::invalid_argument("integrate_singular_stokes: not a Stokes kernel");
  // (delta_ij/r + r_i r_j/r^3) r dr = (delta_ij + d_i d_j) dr
  return polar_sum(tri, point, [](double r, const Vec3& d) {
    Mat3 m = Mat3::identity();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) += d[i] * d[j];
    return m * r;
  });
}

}  // namespace bemrelax::quadrature
