/** @file test_fmm.cpp
 * @brief Octree, expansion operators and fast multipole evaluation against direct sums
 */

#include <bemrelax/expansion.hpp>
#include <bemrelax/fmm.hpp>
#include <bemrelax/octree.hpp>

#include <doctest.h>

#include "../oracles/oracles.hpp"

#include <numeric>

using namespace bemrelax;
using namespace bemrelax::fmm;
using kernels::KernelKind;

namespace {

double direct_inv_r(const std::vector<Vec3>& y, const std::vector<double>& q, const Vec3& x) {
  return 4 * kPi * oracle::laplace_potential(y, q, {x})[0];
}

std::vector<double> signed_charges(std::size_t n, std::uint64_t seed) {
  const auto u = oracle::lcg_points(n, seed);
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) q[i] = 2 * u[i].x - 1;
  return q;
}

}  // namespace

TEST_SUITE("fmm") {

TEST_CASE("octree over one point is a single leaf") {
  const std::vector<Vec3> pts{{0.5, 0.5, 0.5}};
  const auto t = build_tree(pts, 10);
  REQUIRE(t.cells.size() == 1);
  CHECK(t.cells[0].leaf());
  CHECK(t.cells[0].count() == 1);
}

TEST_CASE("octree leaves respect n_crit and partition the bodies") {
  const auto pts = oracle::lcg_points(1000, 5);
  const auto t = build_tree(pts, 126);
  std::vector<int> seen(pts.size(), 0);
  for (const auto& c : t.cells) {
    if (c.leaf()) {
      CHECK(c.count() <= 126);
      for (auto b : t.bodies(c)) ++seen[b];
      const auto bodies = t.bodies(c);
      CHECK(std::is_sorted(bodies.begin(), bodies.end()));
    } else {
      std::size_t sum = 0, expect = c.begin;
      for (int k = c.child_begin; k < c.child_begin + c.child_count; ++k) {
        const auto& ch = t.cells[k];
        CHECK(ch.parent == static_cast<int>(&c - t.cells.data()));
        CHECK(ch.begin == expect);
        CHECK(ch.half_width == doctest::Approx(c.half_width / 2));
        expect = ch.end;
        sum += ch.count();
      }
      CHECK(sum == c.count());
    }
    for (auto b : t.bodies(c)) CHECK(norm(pts[b] - c.center) <= c.radius * (1 + 1e-14));
  }
  for (int s : seen) CHECK(s == 1);
  for (int l = 0; l + 1 < static_cast<int>(t.level_offsets.size()); ++l)
    for (int k = t.level_offsets[l]; k < t.level_offsets[l + 1]; ++k) CHECK(t.cells[k].level == l);
}

TEST_CASE("coincident and collinear points terminate at the depth cap") {
  std::vector<Vec3> same(300, Vec3{0.25, 0.25, 0.25});
  const auto a = build_tree(same, 10);
  CHECK(a.depth() <= kMaxTreeDepth);
  std::vector<Vec3> line;
  for (int i = 0; i < 500; ++i) line.push_back({i * 1e-3, 0, 0});
  const auto b = build_tree(line, 4);
  CHECK(b.depth() <= kMaxTreeDepth);
  for (const auto& c : b.cells)
    if (c.leaf()) CHECK(c.count() <= 4);
  CHECK_THROWS_AS(build_tree(std::vector<Vec3>{}, 10), std::invalid_argument);
  CHECK_THROWS_AS(build_tree(line, 0), std::invalid_argument);
}

TEST_CASE("monopole at the expansion center") {
  const auto e = Expansion::p2m({0, 0, 0}, 6, {{0, 0, 0}}, {2.5});
  CHECK(e.coefficient(0, 0) == cplx(2.5, 0));
  for (int n = 1; n <= 6; ++n)
    for (int m = -n; m <= n; ++m) CHECK(std::abs(e.coefficient(n, m)) == 0.0);
  CHECK(e.m2p({0, 3, 4}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(e.coefficients().size() == 49);
  CHECK_THROWS_AS(e.coefficient(7, 0), std::out_of_range);
}

TEST_CASE("expansions of real sources are conjugate symmetric") {
  const auto y = oracle::lcg_points(20, 3);
  const auto e = Expansion::p2m({0.5, 0.5, 0.5}, 8, y, signed_charges(20, 4));
  for (int n = 0; n <= 8; ++n)
    for (int m = 1; m <= n; ++m) {
      const cplx mirror = (m % 2 ? -1.0 : 1.0) * std::conj(e.coefficient(n, m));
      CHECK(std::abs(e.coefficient(n, -m) - mirror) < 1e-14 * (1 + std::abs(mirror)));
    }
}

TEST_CASE("m2m then m2p equals p2m at the parent then m2p") {
  const auto y = oracle::lcg_points(30, 7);
  const auto q = signed_charges(30, 8);
  const Vec3 child{0.5, 0.5, 0.5}, parent{0.2, 0.9, 0.4}, x{4, -3, 5};
  const int p = 10;
  const auto shifted = Expansion::p2m(child, p, y, q).m2m(parent);
  const auto direct = Expansion::p2m(parent, p, y, q);
  for (std::size_t k = 0; k < direct.coefficients().size(); ++k)
    CHECK(std::abs(shifted.coefficients()[k] - direct.coefficients()[k]) < 1e-12);
  CHECK(std::abs(shifted.m2p(x) - direct.m2p(x)) < 1e-12);
}

TEST_CASE("single-cluster error stays below the truncation bound") {
  const auto y = oracle::lcg_points(100, 11);
  const auto q = signed_charges(100, 12);
  const Vec3 c{0.5, 0.5, 0.5};
  double a = 0;
  for (const auto& v : y) a = std::max(a, norm(v - c));
  const double sum_abs = std::accumulate(q.begin(), q.end(), 0.0, [](double s, double v) { return s + std::abs(v); });
  const Vec3 x = c + 2 * a * normalized(Vec3{1, 2, 2});
  const double exact = direct_inv_r(y, q, x);
  for (int p : {2, 5, 8}) {
    const double err = std::abs(Expansion::p2m(c, p, y, q).m2p(x) - exact);
    const double bound = multipole_error_bound(sum_abs, 2 * a, a, p);
    CHECK(bound == doctest::Approx(sum_abs / a * std::pow(0.5, p + 1)));
    CHECK_MESSAGE(err <= bound, "p = ", p);
  }
}

TEST_CASE("m2l, l2l and local gradients agree with direct sums") {
  const auto y = oracle::lcg_points(40, 13);
  const auto q = signed_charges(40, 14);
  const Vec3 c{0.5, 0.5, 0.5}, l{6.5, 0.5, 0.5}, lc{6.7, 0.3, 0.6}, x{6.9, 0.2, 0.75};
  const int p = 14;
  const auto loc = Expansion::p2m(c, p, y, q).m2l(l).l2l(lc);
  CHECK(loc.l2p(x) == doctest::Approx(direct_inv_r(y, q, x)).epsilon(1e-9));
  Vec3 g;
  for (std::size_t j = 0; j < y.size(); ++j) {
    const Vec3 r = x - y[j];
    g += (-q[j] / std::pow(norm(r), 3)) * r;
  }
  const Vec3 gl = loc.l2p_gradient(x), gm = Expansion::p2m(c, p, y, q).m2p_gradient(x);
  for (int k = 0; k < 3; ++k) {
    CHECK(gl[k] == doctest::Approx(g[k]).epsilon(1e-8));
    CHECK(gm[k] == doctest::Approx(g[k]).epsilon(1e-8));
  }
}

TEST_CASE("dipole sources reproduce d.(x - y)/|x - y|^3") {
  const std::vector<Vec3> y{{0.4, 0.6, 0.5}, {0.55, 0.45, 0.6}};
  const std::vector<Vec3> d{{0.3, -1.0, 0.2}, {1.0, 0.5, -0.7}};
  const auto e = Expansion::p2m({0.5, 0.5, 0.5}, 16, y, {0.0, 0.0}, d);
  const Vec3 x{3, 2, -1};
  double exact = 0;
  for (int j = 0; j < 2; ++j) exact += dot(d[j], x - y[j]) / std::pow(norm(x - y[j]), 3);
  CHECK(e.m2p(x) == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("required order from the allowed error") {
  CHECK(required_p(1e-3) == 10);
  CHECK(required_p(1.0) == 0);
  CHECK(required_p(0.5) == 1);
  CHECK_THROWS_AS(required_p(0.0), std::invalid_argument);
  CHECK_THROWS_AS(required_p(2.0), std::invalid_argument);
}

TEST_CASE("interaction lists cover every source exactly once") {
  const auto s = oracle::lcg_points(3000, 21), t = oracle::lcg_points(2000, 22);
  for (auto policy : {FarPolicy::Fmm, FarPolicy::Treecode}) {
    FmmParams fp;
    fp.n_crit = 32;
    fp.policy = policy;
    const FmmPlan plan(t, s, fp);
    for (auto c : plan.coverage_counts()) CHECK(c == s.size());
    const auto k = plan.counts();
    CHECK(k.far_pairs > 0);
    CHECK(k.near_interactions < s.size() * t.size());
  }
  CHECK_THROWS_AS(FmmPlan(t, s, {126, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(FmmPlan(t, s, {126, -0.1}), std::invalid_argument);
}

TEST_CASE("theta = 0 reproduces the direct sum bit for bit") {
  const auto s = oracle::lcg_points(600, 31), t = oracle::lcg_points(300, 32);
  kernels::SourceSet src{s, signed_charges(600, 33), {}};
  FmmParams fp;
  fp.theta = 0;
  fp.n_crit = 20;
  CHECK(evaluate(KernelKind::LaplaceSingle, src, t, 8, fp) == kernels::direct_sum(KernelKind::LaplaceSingle, src, t));
  std::vector<double> f(1800);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::sin(0.3 * i);
  kernels::SourceSet st{s, f, {}};
  CHECK(evaluate(KernelKind::Stokeslet, st, t, 8, fp) == kernels::direct_sum(KernelKind::Stokeslet, st, t));
}

TEST_CASE("Laplace evaluation at p = 15 is within 1e-6 of the direct sum") {
  const auto s = oracle::lcg_points(10000, 41), t = oracle::lcg_points(2000, 42);
  const auto q = signed_charges(10000, 43);
  const auto ref = oracle::laplace_potential(s, q, t);
  for (auto policy : {FarPolicy::Fmm, FarPolicy::Treecode}) {
    FmmParams fp;
    fp.policy = policy;
    CHECK(oracle::l2_rel(evaluate(KernelKind::LaplaceSingle, {s, q, {}}, t, 15, fp), ref) <= 1e-6);
  }
}

TEST_CASE("error decreases with the expansion order") {
  const auto s = oracle::lcg_points(4000, 51), t = oracle::lcg_points(4000, 52);
  const auto q = signed_charges(4000, 53);
  const auto ref = oracle::laplace_potential(s, q, t);
  double prev = 1;
  FmmParams fp;
  fp.n_crit = 32;
  for (int p : {2, 4, 8, 12}) {
    const double e = oracle::l2_rel(evaluate(KernelKind::LaplaceSingle, {s, q, {}}, t, p, fp), ref);
    CHECK(e < prev);
    prev = e;
  }
}

TEST_CASE("stokeslet evaluation at p = 16 is within 1e-5 of the direct sum") {
  const auto s = oracle::lcg_points(3000, 61), t = oracle::lcg_points(800, 62);
  std::vector<double> f(9000);
  const auto u = oracle::lcg_points(3000, 63);
  for (std::size_t i = 0; i < 3000; ++i) {
    f[3 * i] = u[i].x - 0.5;
    f[3 * i + 1] = u[i].y - 0.5;
    f[3 * i + 2] = u[i].z - 0.5;
  }
  FmmParams fp;
  fp.n_crit = 64;
  const auto got = evaluate(KernelKind::Stokeslet, {s, f, {}}, t, 16, fp);
  CHECK(oracle::l2_rel(got, oracle::stokeslet_velocity(s, f, t)) <= 1e-5);
}

TEST_CASE("double-layer kernels through dipole expansions") {
  const auto s = oracle::lcg_points(2000, 71), t = oracle::lcg_points(400, 72);
  const auto dir = oracle::lcg_points(2000, 73);
  std::vector<Vec3> n(2000);
  for (std::size_t i = 0; i < n.size(); ++i) n[i] = normalized(dir[i] - Vec3{0.5, 0.5, 0.5});
  FmmParams fp;
  fp.n_crit = 64;
  kernels::SourceSet lap{s, signed_charges(2000, 74), n};
  CHECK(oracle::l2_rel(evaluate(KernelKind::LaplaceDouble, lap, t, 14, fp),
                       kernels::direct_sum(KernelKind::LaplaceDouble, lap, t)) < 1e-6);
  std::vector<double> g(6000);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::cos(0.7 * i);
  kernels::SourceSet sto{s, g, n};
  CHECK(oracle::l2_rel(evaluate(KernelKind::Stresslet, sto, t, 14, fp),
                       kernels::direct_sum(KernelKind::Stresslet, sto, t)) < 1e-5);
}

TEST_CASE("results do not depend on the thread count") {
  const auto s = oracle::lcg_points(5000, 81), t = oracle::lcg_points(3000, 82);
  const auto q = signed_charges(5000, 83);
  FmmParams one, four;
  one.threads = 1;
  four.threads = 4;
  CHECK(evaluate(KernelKind::LaplaceSingle, {s, q, {}}, t, 6, one) ==
        evaluate(KernelKind::LaplaceSingle, {s, q, {}}, t, 6, four));
}

}
