#include <bemrelax/octree.hpp>

#include <algorithm>
#include <array>
#include <limits>
#include <stdexcept>

namespace bemrelax::fmm {

namespace {

void fit_bodies(Cell& cell, const Octree& tree, std::span<const Vec3> pts, std::span<const double> extents,
                std::span<const double> guards) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  Vec3 lo{inf, inf, inf}, hi{-inf, -inf, -inf};
  for (std::size_t b : tree.bodies(cell)) {
    const double e = extents.empty() ? 0.0 : extents[b];
    for (int k = 0; k < 3; ++k) {
      lo[k] = std::min(lo[k], pts[b][k] - e);
      hi[k] = std::max(hi[k], pts[b][k] + e);
    }
  }
  cell.center = 0.5 * (lo + hi);
  cell.radius = 0;
  cell.guard = 0;
  for (std::size_t b : tree.bodies(cell)) {
    const double e = extents.empty() ? 0.0 : extents[b];
    cell.radius = std::max(cell.radius, norm(pts[b] - cell.center) + e);
    if (!guards.empty()) cell.guard = std::max(cell.guard, guards[b]);
  }
}

}  // namespace

Octree build_tree(std::span<const Vec3> points, int n_crit, std::span<const double> extents,
                  std::span<const double> guards) {
  if (points.empty()) throw std::invalid_argument("build_tree: no points");
  if (n_crit < 1) throw std::invalid_argument("build_tree: n_crit must be >= 1");
  if ((!extents.empty() && extents.size() != points.size()) || (!guards.empty() && guards.size() != points.size()))
    throw std::invalid_argument("build_tree: extents/guards size mismatch");

  Octree tree;
  tree.n_crit = n_crit;
  tree.order.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) tree.order[i] = i;

  Vec3 lo = points[0], hi = points[0];
  for (const Vec3& p : points)
    for (int k = 0; k < 3; ++k) {
      lo[k] = std::min(lo[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
  double half = 0.5 * std::max({hi.x - lo.x, hi.y - lo.y, hi.z - lo.z});
  half = half > 0 ? half * (1 + 1e-12) : 1.0;

  Cell root;
  root.box_center = 0.5 * (lo + hi);
  root.half_width = half;
  root.begin = 0;
  root.end = points.size();
  tree.cells.push_back(root);

  std::vector<std::size_t> scratch;
  for (std::size_t ci = 0; ci < tree.cells.size(); ++ci) {
    if (static_cast<int>(tree.level_offsets.size()) == tree.cells[ci].level)
      tree.level_offsets.push_back(static_cast<int>(ci));  // first cell of a new level

    Cell cell = tree.cells[ci];
    if (cell.count() <= static_cast<std::size_t>(n_crit) || cell.level >= kMaxTreeDepth) continue;

    // Stable partition of the body range by octant.
    std::array<std::size_t, 9> start{};
    auto octant = [&](std::size_t b) {
      const Vec3& p = points[b];
      return (p.x > cell.box_center.x ? 1 : 0) | (p.y > cell.box_center.y ? 2 : 0) | (p.z > cell.box_center.z ? 4 : 0);
    };
    for (std::size_t k = cell.begin; k < cell.end; ++k) ++start[octant(tree.order[k]) + 1];
    for (int o = 0; o < 8; ++o) start[o + 1] += start[o];
    scratch.resize(cell.count());
    auto fill = start;
    for (std::size_t k = cell.begin; k < cell.end; ++k) {
      std::size_t b = tree.order[k];
      scratch[fill[octant(b)]++] = b;
    }
    std::copy(scratch.begin(), scratch.end(), tree.order.begin() + static_cast<std::ptrdiff_t>(cell.begin));

    tree.cells[ci].child_begin = static_cast<int>(tree.cells.size());
    const double h = 0.5 * cell.half_width;
    for (int o = 0; o < 8; ++o) {
      if (start[o + 1] == start[o]) continue;
      Cell child;
      child.box_center = cell.box_center + Vec3{(o & 1) ? h : -h, (o & 2) ? h : -h, (o & 4) ? h : -h};
      child.half_width = h;
      child.level = cell.level + 1;
      child.parent = static_cast<int>(ci);
      child.begin = cell.begin + start[o];
      child.end = cell.begin + start[o + 1];
      tree.cells.push_back(child);
      ++tree.cells[ci].child_count;
    }
  }
  tree.level_offsets.push_back(static_cast<int>(tree.cells.size()));

  for (Cell& c : tree.cells) fit_bodies(c, tree, points, extents, guards);
  return tree;
}

}  // namespace bemrelax::fmm
