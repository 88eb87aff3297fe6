#pragma once

/** @file octree.hpp
 * @brief Adaptive octree over point bodies with N_CRIT leaf capacity
 */

#include <bemrelax/vec3.hpp>

#include <cstddef>
#include <span>
#include <vector>

namespace bemrelax::fmm {

inline constexpr int kMaxTreeDepth = 20;

struct Cell {
  Vec3 box_center;  // geometric cube
  double half_width = 0;
  int level = 0;
  int parent = -1;
  int child_begin = 0;  // children are cells [child_begin, child_begin + child_count)
  int child_count = 0;
  std::size_t begin = 0, end = 0;  // bodies are order[begin, end)

  Vec3 center;        // expansion center: middle of the bodies' bounding box
  double radius = 0;  // max over bodies of |x_b - center| + extent_b
  double guard = 0;   // max over bodies of guard_b

  bool leaf() const { return child_count == 0; }
  std::size_t count() const { return end - begin; }
};

struct Octree {
  std::vector<Cell> cells;          // breadth-first, so parents precede children and levels are contiguous
  std::vector<std::size_t> order;   // body index at each sorted position; ascending within every leaf
  std::vector<int> level_offsets;   // cells of level l are [level_offsets[l], level_offsets[l+1])
  int n_crit = 0;

  int depth() const { return static_cast<int>(level_offsets.size()) - 2; }
  std::span<const std::size_t> bodies(const Cell& c) const { return {order.data() + c.begin, c.count()}; }
};

/**
 * Splits cells holding more than n_crit bodies until level kMaxTreeDepth; bodies that cannot be
 * separated stay together in an oversized leaf. Octant assignment is stable, so bodies of every leaf
 * appear in ascending index order. `extents` (body half-size added to the cell radius) and
 * `guards` (minimum far-field distance demanded by a body) may be empty.
 * Throws std::invalid_argument for empty input or n_crit < 1.
 */
Octree build_tree(std::span<const Vec3> points, int n_crit, std::span<const double> extents = {},
                  std::span<const double> guards = {});

}  // namespace bemrelax::fmm
