#include <bemrelax/mesh.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <unordered_map>

namespace bemrelax::mesh {

TriMesh::TriMesh(std::vector<Vec3> vertices, const std::vector<std::array<int, 3>>& triangles,
                 const std::vector<int>& tags)
    : vertices_(std::move(vertices)) {
  if (!tags.empty() && tags.size() != triangles.size())
    throw std::invalid_argument("TriMesh: tag count does not match triangle count");
  const int nv = static_cast<int>(vertices_.size());
  panels_.reserve(triangles.size());
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    Panel p;
    p.v = triangles[t];
    for (int k : p.v)
      if (k < 0 || k >= nv)
        throw std::invalid_argument("TriMesh: vertex index " + std::to_string(k) + " out of range in panel " +
                                    std::to_string(t));
    const Vec3& a = vertices_[p.v[0]];
    const Vec3& b = vertices_[p.v[1]];
    const Vec3& c = vertices_[p.v[2]];
    Vec3 n = cross(b - a, c - a);
    double twice_area = norm(n);
    if (!(twice_area > 0))
      throw std::invalid_argument("TriMesh: degenerate panel " + std::to_string(t));
    p.area = 0.5 * twice_area;
    p.normal = n / twice_area;
    p.centroid = (a + b + c) / 3.0;
    p.tag = tags.empty() ? 0 : tags[t];
    panels_.push_back(p);
  }
}

double TriMesh::total_area() const {
  double s = 0;
  for (const auto& p : panels_) s += p.area;
  return s;
}

double TriMesh::signed_volume() const {
  double s = 0;
  for (std::size_t j = 0; j < panels_.size(); ++j) {
    auto [a, b, c] = corners(j);
    s += dot(a, cross(b, c));
  }
  return s / 6.0;
}

MeshCheck validate(const TriMesh& mesh) {
  MeshCheck check;
  std::ostringstream diag;

  // directed edge -> count; a closed orientable surface has each directed edge once
  // and its reverse once.
  std::map<std::pair<int, int>, int> directed;
  for (const auto& p : mesh.panels())
    for (int k = 0; k < 3; ++k) ++directed[{p.v[k], p.v[(k + 1) % 3]}];

  check.closed = true;
  for (const auto& [edge, count] : directed) {
    auto rev = directed.find({edge.second, edge.first});
    if (count != 1 || rev == directed.end() || rev->second != 1) {
      check.closed = false;
      diag << "edge (" << edge.first << "," << edge.second << ") is not shared by exactly two panels; ";
      break;
    }
  }

  check.nondegenerate = std::all_of(mesh.panels().begin(), mesh.panels().end(),
                                    [](const Panel& p) { return p.area > 0; });
  if (!check.nondegenerate) diag << "zero-area panel present; ";

  check.signed_volume = mesh.signed_volume();
  check.outward = check.signed_volume > 0;
  if (!check.outward) diag << "signed volume " << check.signed_volume << " <= 0; ";

  Vec3 s;
  for (const auto& p : mesh.panels()) s += p.normal * p.area;
  check.normal_area_sum = norm(s);

  check.diagnostic = diag.str();
  return check;
}

TriMesh make_sphere(int level, double radius) {
  if (level < 0 || level > 8) throw std::invalid_argument("make_sphere: level must be in [0, 8]");
  if (!(radius > 0)) throw std::invalid_argument("make_sphere: radius must be positive");

  std::vector<Vec3> verts = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  std::vector<std::array<int, 3>> tris = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                                          {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};

  for (int l = 0; l < level; ++l) {
    std::unordered_map<std::uint64_t, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = (static_cast<std::uint64_t>(std::min(a, b)) << 32) | static_cast<std::uint32_t>(std::max(a, b));
      auto [it, inserted] = midpoint.try_emplace(key, static_cast<int>(verts.size()));
      if (inserted) verts.push_back(normalized(0.5 * (verts[a] + verts[b])));
      return it->second;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(4 * tris.size());
    for (const auto& t : tris) {
      int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({ab, t[1], bc});
      next.push_back({ca, bc, t[2]});
      next.push_back({ab, bc, ca});
    }
    tris = std::move(next);
  }
  for (auto& v : verts) v *= radius;
  return TriMesh(std::move(verts), tris);
}

Vec3 rbc_map_vertex(const Vec3& v, const RbcCoefficients& c, bool* clamped) {
  Vec3 out{v.x * c.r, v.y * c.r, 0.0};
  double s = std::sqrt(out.x * out.x + out.y * out.y) / c.r;  // rho / r
  bool clamp = s > 1.0;
  if (clamp) s = 1.0;
  if (clamped) *clamped = clamp;
  double s2 = s * s;
  double z = 0.5 * std::sqrt(1.0 - s2) * (c.c0 + c.c2 * s2 + c.c4 * s2 * s2);
  out.z = v.z > 0 ? z : (v.z < 0 ? -z : 0.0);
  return out;
}

RbcTransform rbc_transform(const TriMesh& unit_sphere, const RbcCoefficients& coeffs) {
  if (!(coeffs.r > 0)) throw std::invalid_argument("rbc_transform: r must be positive");
  RbcTransform result;
  std::vector<Vec3> verts;
  verts.reserve(unit_sphere.vertices().size());
  for (const auto& v : unit_sphere.vertices()) {
    bool clamped = false;
    verts.push_back(rbc_map_vertex(v, coeffs, &clamped));
    result.clamped_vertices += clamped ? 1 : 0;
  }
  std::vector<std::array<int, 3>> tris;
  std::vector<int> tags;
  for (const auto& p : unit_sphere.panels()) {
    tris.push_back(p.v);
    tags.push_back(p.tag);
  }
  result.mesh = TriMesh(std::move(verts), tris, tags);
  return result;
}

namespace {

//! Portable uniform draw in [0,1): std distributions are implementation-defined.
double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

//! Uniformly distributed rotation (Shoemake's quaternion method).
Mat3 random_rotation(std::mt19937_64& gen) {
  double u1 = uniform01(gen), u2 = uniform01(gen), u3 = uniform01(gen);
  double a = std::sqrt(1 - u1), b = std::sqrt(u1);
  double w = a * std::sin(2 * kPi * u2), x = a * std::cos(2 * kPi * u2);
  double y = b * std::sin(2 * kPi * u3), z = b * std::cos(2 * kPi * u3);
  Mat3 r;
  r(0, 0) = 1 - 2 * (y * y + z * z);
  r(0, 1) = 2 * (x * y - z * w);
  r(0, 2) = 2 * (x * z + y * w);
  r(1, 0) = 2 * (x * y + z * w);
  r(1, 1) = 1 - 2 * (x * x + z * z);
  r(1, 2) = 2 * (y * z - x * w);
  r(2, 0) = 2 * (x * z - y * w);
  r(2, 1) = 2 * (y * z + x * w);
  r(2, 2) = 1 - 2 * (x * x + y * y);
  return r;
}

}  // namespace

TriMesh make_scene(const TriMesh& cell, int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("make_scene: count must be >= 1");
  if (count == 1) return cell;

  Vec3 lo = cell.vertices().front(), hi = lo;
  for (const auto& v : cell.vertices()) {
    lo = {std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
    hi = {std::max(hi.x, v.x), std::max(hi.y, v.y), std::max(hi.z, v.z)};
  }
  const Vec3 center = 0.5 * (lo + hi);
  double radius = 0;
  for (const auto& v : cell.vertices()) radius = std::max(radius, norm(v - center));

  const double safe = 2.0 * radius * 1.05;  // bounding spheres plus 5% margin
  const double box = 2.0 * safe * std::cbrt(static_cast<double>(count));
  constexpr int kMaxTries = 10000;

  std::mt19937_64 gen(seed);
  std::vector<Vec3> offsets;
  std::vector<Vec3> verts;
  std::vector<std::array<int, 3>> tris;
  std::vector<int> tags;
  const int nv = static_cast<int>(cell.vertices().size());

  for (int c = 0; c < count; ++c) {
    Mat3 rot = random_rotation(gen);
    Vec3 off;
    int tries = 0;
    for (;; ++tries) {
      if (tries == kMaxTries)
        throw std::runtime_error("make_scene: could not place cell " + std::to_string(c) + " of " +
                                 std::to_string(count) + " after " + std::to_string(kMaxTries) +
                                 " tries (box " + std::to_string(box) + ", radius " + std::to_string(radius) + ")");
      off = {uniform01(gen) * box, uniform01(gen) * box, uniform01(gen) * box};
      bool clear = std::all_of(offsets.begin(), offsets.end(),
                               [&](const Vec3& o) { return norm(o - off) > safe; });
      if (clear) break;
    }
    offsets.push_back(off);
    for (const auto& v : cell.vertices()) verts.push_back(rot * (v - center) + off);
    for (const auto& p : cell.panels()) {
      tris.push_back({p.v[0] + c * nv, p.v[1] + c * nv, p.v[2] + c * nv});
      tags.push_back(p.tag);
    }
  }
  return TriMesh(std::move(verts), tris, tags);
}

}  // namespace bemrelax::mesh
