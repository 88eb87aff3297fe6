/** @file test_kernels.cpp
 * @brief Green's functions and the direct N-body sum
 */

#include <bemrelax/kernels.hpp>

#include <doctest.h>

#include "../oracles/oracles.hpp"

using namespace bemrelax;
using namespace bemrelax::kernels;

TEST_SUITE("kernels") {

TEST_CASE("Laplace single layer values and symmetry") {
  CHECK(laplace_single({1, 0, 0}, {0, 0, 0}) == doctest::Approx(0.0795775).epsilon(1e-6));
  CHECK(laplace_single({0, 2, 0}, {0, 0, 0}) == doctest::Approx(1 / (8 * kPi)).epsilon(1e-15));
  const Vec3 x{0.3, -1.2, 0.7}, y{2.0, 0.1, -0.4};
  CHECK(laplace_single(x, y) == laplace_single(y, x));
  CHECK_THROWS_AS(laplace_single(x, x), std::domain_error);
}

TEST_CASE("Laplace double layer values") {
  CHECK(laplace_double({2, 0, 0}, {0, 0, 0}, {1, 0, 0}) == doctest::Approx(1 / (16 * kPi)).epsilon(1e-15));
  CHECK(laplace_double({0, 2, 0}, {0, 0, 0}, {1, 0, 0}) == 0.0);
  const Vec3 x{0.3, -1.2, 0.7}, y{2.0, 0.1, -0.4}, n = normalized(Vec3{1, 2, 3});
  CHECK(laplace_double(x, y, -n) == -laplace_double(x, y, n));
}

TEST_CASE("stokeslet values, symmetry and trace") {
  const Mat3 g = stokeslet({2, 0, 0}, {0, 0, 0});
  CHECK(g(0, 0) == doctest::Approx(1.0));
  CHECK(g(1, 1) == doctest::Approx(0.5));
  CHECK(g(2, 2) == doctest::Approx(0.5));
  CHECK(g(0, 1) == 0.0);
  const Vec3 x{0.3, -1.2, 0.7}, y{2.0, 0.1, -0.4};
  const Mat3 h = stokeslet(x, y);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(h(i, j) == h(j, i));
  CHECK(h(0, 0) + h(1, 1) + h(2, 2) == doctest::Approx(4 / norm(x - y)).epsilon(1e-14));
}

TEST_CASE("stresslet values and homogeneity") {
  const Mat3 t = stresslet_contracted({1, 0, 0}, {0, 0, 0}, {1, 0, 0});
  CHECK(t(0, 0) == doctest::Approx(6.0));
  for (int k = 1; k < 9; ++k) CHECK(t.a[k] == 0.0);
  const Mat3 z = stresslet_contracted({0, 1, 0}, {0, 0, 0}, {1, 0, 0});
  for (double v : z.a) CHECK(v == 0.0);
  const Vec3 r{0.4, -0.3, 0.9}, n = normalized(Vec3{1, 1, 0});
  const Mat3 a = stresslet_r(r, n), b = stresslet_r(2.0 * r, n);
  for (int k = 0; k < 9; ++k) CHECK(b.a[k] == doctest::Approx(a.a[k] / 4).epsilon(1e-14));
}

TEST_CASE("direct sum: single source and superposition") {
  SourceSet s{{{0, 0, 0}}, {1.0}, {}};
  const std::vector<Vec3> t{{0, 0, 1}};
  CHECK(direct_sum(KernelKind::LaplaceSingle, s, t)[0] == doctest::Approx(1 / (4 * kPi)).epsilon(1e-15));
  SourceSet two{{{-1, 0, 0}, {1, 0, 0}}, {1.0, 1.0}, {}};
  const std::vector<Vec3> mid{{0, 0, 0}};
  SourceSet one{{{1, 0, 0}}, {1.0}, {}};
  CHECK(direct_sum(KernelKind::LaplaceSingle, two, mid)[0] ==
        doctest::Approx(2 * direct_sum(KernelKind::LaplaceSingle, one, mid)[0]).epsilon(1e-15));
}

TEST_CASE("direct sum matches an independent double loop") {
  const auto src = oracle::lcg_points(100, 1), tgt = oracle::lcg_points(37, 2);
  std::vector<double> q(100), f(300);
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = std::sin(1.0 + i);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::cos(0.5 * i);
  const auto lap = direct_sum(KernelKind::LaplaceSingle, {src, q, {}}, tgt);
  CHECK(oracle::l2_rel(lap, oracle::laplace_potential(src, q, tgt)) < 1e-14);
  const auto sto = direct_sum(KernelKind::Stokeslet, {src, f, {}}, tgt);
  CHECK(oracle::l2_rel(sto, oracle::stokeslet_velocity(src, f, tgt)) < 1e-14);
}

TEST_CASE("coincident target and source name the pair") {
  SourceSet s{{{0, 0, 0}, {1, 1, 1}}, {1.0, 1.0}, {}};
  const std::vector<Vec3> t{{1, 1, 1}};
  CHECK_THROWS_AS(direct_sum(KernelKind::LaplaceSingle, s, t), std::domain_error);
}

TEST_CASE("source sets must match the kernel") {
  SourceSet s{{{0, 0, 0}}, {1.0}, {}};
  CHECK_THROWS_AS(check_sources(KernelKind::LaplaceDouble, s), std::invalid_argument);
  CHECK_THROWS_AS(check_sources(KernelKind::Stokeslet, s), std::invalid_argument);
  CHECK_NOTHROW(check_sources(KernelKind::LaplaceSingle, s));
}

}
