/** @file test_mesh.cpp
 * @brief Sphere, red-blood-cell and scene generation; mesh file round trips
 */

#include <bemrelax/mesh.hpp>

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace bemrelax;
using namespace bemrelax::mesh;

TEST_SUITE("mesh") {

TEST_CASE("sphere panel counts follow 8*4^level") {
  CHECK(make_sphere(0).size() == 8);
  CHECK(make_sphere(2).size() == 128);
  CHECK(make_sphere(4).size() == 2048);
}

TEST_CASE("sphere is closed, outward and nondegenerate at every level") {
  for (int level = 0; level <= 4; ++level) {
    const auto m = make_sphere(level, 2.5);
    const auto c = validate(m);
    CHECK_MESSAGE(c.ok(), c.diagnostic);
    CHECK(c.normal_area_sum < 1e-10 * m.total_area());
    for (const auto& v : m.vertices()) CHECK(norm(v) == doctest::Approx(2.5).epsilon(1e-14));
  }
}

TEST_CASE("panel invariants: unit normal, positive area, centroid is the vertex mean") {
  const auto m = make_sphere(3);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto& p = m.panels()[i];
    const auto c = m.corners(i);
    CHECK(std::abs(norm(p.normal) - 1.0) < 1e-12);
    CHECK(p.area > 0);
    CHECK(norm(p.centroid - (c[0] + c[1] + c[2]) / 3.0) < 1e-15);
    CHECK(dot(p.normal, p.centroid) > 0);
  }
}

TEST_CASE("sphere area tends to 4 pi and the level-4 volume is within 5% of 4 pi/3") {
  double prev_gap = 4 * kPi;
  for (int level = 0; level <= 5; ++level) {
    const double gap = 4 * kPi - make_sphere(level).total_area();
    CHECK(gap > 0);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 1e-2);
  const double vol = make_sphere(4).signed_volume();
  CHECK(std::abs(vol - 4 * kPi / 3) < 0.05 * 4 * kPi / 3);
}

TEST_CASE("red blood cell map of the poles and equator") {
  const RbcCoefficients k;
  const Vec3 pole = rbc_map_vertex({0, 0, 1}, k);
  CHECK(pole.x == 0);
  CHECK(pole.y == 0);
  CHECK(pole.z == doctest::Approx(0.405).epsilon(1e-14));
  const Vec3 rim = rbc_map_vertex({1, 0, 0}, k);
  CHECK(rim.x == doctest::Approx(3.91).epsilon(1e-14));
  CHECK(rim.y == 0);
  CHECK(rim.z == 0);
  const Vec3 south = rbc_map_vertex({0, 0, -1}, k);
  CHECK(south.z == doctest::Approx(-0.405).epsilon(1e-14));
}

TEST_CASE("red blood cell mesh from a 2048-panel sphere passes validation") {
  const auto rbc = rbc_transform(make_sphere(4));
  CHECK(rbc.mesh.size() == 2048);
  const auto c = validate(rbc.mesh);
  CHECK_MESSAGE(c.ok(), c.diagnostic);
}

TEST_CASE("scene with one cell leaves the mesh unchanged") {
  const auto cell = rbc_transform(make_sphere(2)).mesh;
  const auto s = make_scene(cell, 1, 3);
  CHECK(s.vertices() == cell.vertices());
  CHECK(s.size() == cell.size());
}

TEST_CASE("scene cells do not overlap and placement is deterministic") {
  const auto cell = rbc_transform(make_sphere(2)).mesh;
  const auto a = make_scene(cell, 4, 7);
  const auto b = make_scene(cell, 4, 7);
  CHECK(a.size() == 4 * cell.size());
  CHECK(a.vertices() == b.vertices());
  CHECK(make_scene(cell, 4, 8).vertices() != a.vertices());
  CHECK(validate(a).ok());

  // Bounding spheres of the copies, each about the mean of its vertices.
  const std::size_t nv = cell.vertices().size();
  std::vector<Vec3> centers(4);
  std::vector<double> radii(4, 0.0);
  for (int c = 0; c < 4; ++c) {
    for (std::size_t v = 0; v < nv; ++v) centers[c] += a.vertices()[c * nv + v];
    centers[c] = centers[c] / static_cast<double>(nv);
    for (std::size_t v = 0; v < nv; ++v) radii[c] = std::max(radii[c], norm(a.vertices()[c * nv + v] - centers[c]));
  }
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) CHECK(norm(centers[i] - centers[j]) > radii[i] + radii[j]);
}

TEST_CASE("64 cells of 2048 panels give 131072 panels") {
  const auto cell = rbc_transform(make_sphere(4)).mesh;
  CHECK(make_scene(cell, 64, 1).size() == 131072);
}

TEST_CASE("mesh file round trip") {
  const auto m = make_sphere(0);
  std::stringstream ss;
  write_mesh(m, ss);
  const auto r = read_mesh(ss);
  CHECK(r.vertices() == m.vertices());
  REQUIRE(r.size() == m.size());
  for (std::size_t i = 0; i < m.size(); ++i) CHECK(r.panels()[i].v == m.panels()[i].v);
}

TEST_CASE("red blood cell round trip preserves the total area exactly") {
  const auto m = rbc_transform(make_sphere(4)).mesh;
  std::stringstream ss;
  write_mesh(m, ss);
  CHECK(read_mesh(ss).total_area() == m.total_area());
}

TEST_CASE("panel count header larger than the listed panels is a parse error") {
  const auto m = make_sphere(0);
  std::stringstream ss;
  write_mesh(m, ss);
  std::string text = ss.str();
  text.replace(0, text.find('\n'), std::to_string(m.vertices().size()) + " 9");
  std::stringstream bad(text);
  CHECK_THROWS_AS(read_mesh(bad), MeshFormatError);
}

TEST_CASE("open surfaces are read with a warning") {
  std::stringstream ss("3 1\n0 0 0\n1 0 0\n0 1 0\n0 1 2 0\n");
  MeshReadInfo info;
  const auto m = read_mesh(ss, &info);
  CHECK(m.size() == 1);
  CHECK_FALSE(info.closed);
  CHECK_FALSE(info.warning.empty());
}

TEST_CASE("bad connectivity is rejected") {
  CHECK_THROWS_AS(TriMesh({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(TriMesh({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, {{0, 1, 2}}), std::invalid_argument);
}

}
