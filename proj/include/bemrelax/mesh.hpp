#pragma once

/** @file mesh.hpp
 * @brief Closed triangulated surfaces: spheres, red blood cells and multi-cell scenes
 */

#include <bemrelax/vec3.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace bemrelax::mesh {

//! Flat triangle with constant-element data; vertex order is counter-clockwise seen from outside.
struct Panel {
  std::array<int, 3> v{};
  Vec3 centroid;
  Vec3 normal;  // unit, outward
  double area = 0;
  int tag = 0;  // boundary-condition id
};

class TriMesh {
 public:
  TriMesh() = default;
  //! Builds panels from connectivity; throws std::invalid_argument on bad indices or zero-area triangles.
  TriMesh(std::vector<Vec3> vertices, const std::vector<std::array<int, 3>>& triangles,
          const std::vector<int>& tags = {});

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Panel>& panels() const { return panels_; }
  std::size_t size() const { return panels_.size(); }

  std::array<Vec3, 3> corners(std::size_t panel) const {
    const auto& p = panels_[panel];
    return {vertices_[p.v[0]], vertices_[p.v[1]], vertices_[p.v[2]]};
  }

  double total_area() const;
  //! Enclosed volume by the divergence theorem; positive when normals point outward.
  double signed_volume() const;

 private:
  std::vector<Vec3> vertices_;
  std::vector<Panel> panels_;
};

struct MeshCheck {
  bool closed = false;         // every edge shared by exactly two panels, opposite orientation
  bool outward = false;        // signed volume > 0
  bool nondegenerate = false;  // all areas > 0
  double signed_volume = 0;
  double normal_area_sum = 0;  // |sum n_j S_j|, vanishes on closed surfaces
  std::string diagnostic;

  bool ok() const { return closed && outward && nondegenerate; }
};

MeshCheck validate(const TriMesh& mesh);

//! Octahedron refined `level` times by 4-way splits, projected onto a sphere: 8*4^level panels.
TriMesh make_sphere(int level, double radius = 1.0);

struct RbcCoefficients {
  double r = 3.91;
  double c0 = 0.81;
  double c2 = 7.83;
  double c4 = -4.39;
};

struct RbcTransform {
  TriMesh mesh;
  int clamped_vertices = 0;  // vertices with rho/r > 1 from round-off
};

//! Maps a unit-sphere mesh onto the biconcave red-blood-cell surface.
RbcTransform rbc_transform(const TriMesh& unit_sphere, const RbcCoefficients& coeffs = {});

//! Position of a single unit-sphere vertex after the red-blood-cell map.
Vec3 rbc_map_vertex(const Vec3& v, const RbcCoefficients& coeffs, bool* clamped = nullptr);

//! `count` randomly rotated, non-overlapping copies of `cell`; deterministic in `seed`.
TriMesh make_scene(const TriMesh& cell, int count, std::uint64_t seed);

class MeshFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MeshReadInfo {
  bool closed = true;  // false raises a warning, not an error
  std::string warning;
};

TriMesh read_mesh(std::istream& in, MeshReadInfo* info = nullptr);
TriMesh read_mesh(const std::filesystem::path& path, MeshReadInfo* info = nullptr);
void write_mesh(const TriMesh& mesh, std::ostream& out);
void write_mesh(const TriMesh& mesh, const std::filesystem::path& path);

}  // namespace bemrelax::mesh
