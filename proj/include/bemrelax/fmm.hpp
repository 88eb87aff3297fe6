#pragma once

/** @file fmm.hpp
 * @brief Dual-tree fast multipole evaluation with a per-call expansion order
 *
 * A plan fixes the target and source octrees and the interaction lists for one (n_crit, theta)
 * pair. The expansion order p is an argument of every far-field evaluation, so a relaxed solver
 * can lower it from one iteration to the next without rebuilding anything.
 *
 * Multipole acceptance: a target cell T and source cell S interact through expansions when
 *   R_T + R_S < theta * |c_T - c_S|   and   |c_T - c_S| - R_T - R_S >= guard_S,
 * where R is the cell radius about its expansion center and guard_S the largest near-field distance
 * requested by any body of S. Everything else descends to leaf pairs handled by direct summation.
 */

#include <bemrelax/kernels.hpp>
#include <bemrelax/octree.hpp>

#include <span>
#include <vector>

namespace bemrelax::fmm {

enum class FarPolicy {
  Fmm,       // M2L into target cells, L2L down, L2P at leaves
  Treecode,  // M2P straight from source multipoles to target points
};

struct FmmParams {
  int n_crit = 126;
  double theta = 0.5;
  FarPolicy policy = FarPolicy::Fmm;
  int threads = 0;  // 0: OpenMP default
};

//! ceil(-log2(eps)) for 0 < eps <= 1; throws std::invalid_argument otherwise.
int required_p(double eps);

//! (sum |q|)/(r - a) * (a/r)^(p+1) for a cluster of radius a seen from distance r > a.
double multipole_error_bound(double sum_abs_q, double r, double a, int p);

//! Far-field emission points grouped by source body: body j owns points [offsets[j], offsets[j+1]).
struct Emitters {
  std::vector<Vec3> positions;
  std::vector<std::size_t> offsets;
  int expansions = 1;  // harmonic expansions carried per point
};

//! Per-point strengths, `expansions` entries per emission point; either array may be empty.
struct EmitterStrengths {
  std::vector<double> charges;
  std::vector<Vec3> dipoles;
};

struct InteractionCounts {
  std::size_t far_pairs = 0;         // accepted (target cell, source cell) pairs
  std::size_t near_pairs = 0;        // (target leaf, source leaf) pairs
  std::size_t near_interactions = 0; // body-body interactions inside near pairs
};

class FmmPlan {
 public:
  FmmPlan(std::span<const Vec3> targets, std::span<const Vec3> sources, const FmmParams& params,
          std::span<const double> source_extents = {}, std::span<const double> source_guards = {});

  const FmmParams& params() const { return params_; }
  int threads() const;
  const Octree& target_tree() const { return ttree_; }
  const Octree& source_tree() const { return stree_; }
  std::size_t num_targets() const { return targets_.size(); }
  std::size_t num_sources() const { return num_sources_; }

  const std::vector<int>& target_leaves() const { return target_leaves_; }
  const std::vector<int>& far_list(int target_cell) const { return far_[target_cell]; }
  const std::vector<int>& near_list(int target_leaf) const { return near_[target_leaf]; }
  //! Source bodies of the leaf's near list, in ascending index order.
  std::vector<std::size_t> near_sources(int target_leaf) const;

  //! Number of sources each target receives through the near and far lists; equals
  //! num_sources() for every target when the lists partition the interactions.
  std::vector<std::size_t> coverage_counts() const;
  InteractionCounts counts() const;

  /**
   * Far-field potentials at every target, order p. Output layout: target t, expansion e at
   * out[(t * E + e) * 4 + {0: phi, 1..3: grad phi}], where phi = sum q/|x-y| + d.(x-y)/|x-y|^3.
   * Gradients are filled only when requested. out is resized and zeroed.
   */
  void far_field(const Emitters& emitters, const EmitterStrengths& strengths, int p, bool gradient,
                 std::vector<double>& out) const;

 private:
  FmmParams params_;
  std::vector<Vec3> targets_;
  std::size_t num_sources_ = 0;
  Octree ttree_, stree_;
  std::vector<int> target_leaves_;
  std::vector<std::vector<int>> far_, near_;  // indexed by target cell
};

/**
 * Kernel sum of kernels::direct_sum approximated with expansions of order p. Stokes kernels are
 * evaluated through four harmonic expansions. With theta = 0 every pair is summed directly in
 * ascending source order and the result equals direct_sum bit for bit.
 */
std::vector<double> evaluate(kernels::KernelKind kind, const kernels::SourceSet& sources,
                             std::span<const Vec3> targets, int p, const FmmParams& params);

}  // namespace bemrelax::fmm
