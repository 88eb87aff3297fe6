#pragma once

/** @file bem.hpp
 * @brief Collocation boundary element operators for Laplace and Stokes on closed triangle meshes
 *
 * Constant elements with collocation at panel centroids. Entry (i, j) of a layer operator is
 *   a_ij = scale * int_{panel j} K(c_i, y) dS_y  +  diagonal * [i == j]
 * with the panel integral chosen by region (far rule, near rule, or singular self-term). The far
 * part of a product comes from the multipole method; the near part from cached or on-the-fly a_ij.
 *
 * Laplace operators use the normal pointing into the body, so that the exterior field 1/r of a
 * unit sphere gives phi = dphi/dn = 1. Stokes operators use the outward normal.
 * Stokes unknowns are interleaved per panel: (x_0, y_0, z_0, x_1, ...).
 */

#include <bemrelax/fmm.hpp>
#include <bemrelax/kernels.hpp>
#include <bemrelax/linear_operator.hpp>
#include <bemrelax/mesh.hpp>
#include <bemrelax/quadrature.hpp>

#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace bemrelax::bem {

enum class Formulation {
  Laplace1stKind,         // unknown dphi/dn, phi given
  Laplace2ndKind,         // unknown phi, dphi/dn given
  StokesTraction1stKind,  // unknown traction, velocity given
};

std::string_view name(Formulation f);
constexpr int unknowns_per_panel(Formulation f) { return f == Formulation::StokesTraction1stKind ? 3 : 1; }

struct PhysicalParams {
  double mu = 1e-3;            // viscosity
  Vec3 velocity{1.0, 0.0, 0.0};  // prescribed boundary velocity
  double radius = 1.0;         // sphere radius for the analytic drag 6 pi mu R u
};

inline double analytic_sphere_drag(const PhysicalParams& pp) { return 6.0 * kPi * pp.mu * pp.radius * norm(pp.velocity); }

struct OperatorConfig {
  quadrature::QuadratureConfig quad;
  fmm::FmmParams fmm;
  std::size_t near_cache_budget = std::size_t{1} << 30;  // bytes; 0 disables the near-field cache
};

//! Largest N accepted by dense_apply.
inline constexpr std::size_t kDenseLimit = 10000;

class LayerOperator : public LinearOperator {
 public:
  /**
   * normal_sign multiplies the mesh normal for double-layer kernels (-1: inward).
   * Builds the trees and interaction lists; fills the near-field cache when it fits the budget.
   */
  LayerOperator(mesh::TriMesh mesh, kernels::KernelKind kind, double scale, double diagonal, double normal_sign,
                OperatorConfig cfg);

  std::size_t size() const override { return mesh_.size() * dim_; }
  void apply(std::span<const double> x, int p, std::span<double> y) const override;

  //! O(N^2) reference product with the same a_ij; throws std::length_error above kDenseLimit panels.
  std::vector<double> dense_apply(std::span<const double> x) const;

  //! Writes a_ij (1 or 9 row-major entries).
  void coefficient(std::size_t i, std::size_t j, double* a) const;

  const mesh::TriMesh& mesh() const { return mesh_; }
  kernels::KernelKind kind() const { return kind_; }
  int dim() const { return dim_; }
  const fmm::FmmPlan& plan() const { return *plan_; }
  bool near_cached() const { return !near_cols_.empty(); }
  std::size_t near_entries() const { return near_entries_; }

 private:
  void apply_near(std::span<const double> x, std::span<double> y) const;
  void apply_far(std::span<const double> x, int p, std::span<double> y) const;

  mesh::TriMesh mesh_;
  kernels::KernelKind kind_;
  double scale_, diagonal_, normal_sign_;
  OperatorConfig cfg_;
  int dim_;
  std::vector<Vec3> centroids_;
  std::unique_ptr<fmm::FmmPlan> plan_;
  fmm::Emitters emitters_;
  std::vector<double> emit_weights_;  // q_k S_j per emission point
  std::size_t near_entries_ = 0;
  std::vector<std::size_t> near_rows_;  // CSR over targets
  std::vector<std::size_t> near_cols_;
  std::vector<double> near_vals_;
};

//! Operator A of the formulation.
std::unique_ptr<LayerOperator> make_operator(const mesh::TriMesh& mesh, Formulation f, const PhysicalParams& pp,
                                             const OperatorConfig& cfg);

/**
 * Right-hand side from per-panel boundary data (phi, dphi/dn or velocity, interleaved for Stokes),
 * including the 1/2 free term where it sits on the known side. Products use order p.
 * Throws std::invalid_argument when the data length does not match the mesh.
 */
std::vector<double> assemble_rhs(const mesh::TriMesh& mesh, Formulation f, std::span<const double> data,
                                 const PhysicalParams& pp, const OperatorConfig& cfg, int p);

//! Boundary data of the reference problems: phi = dphi/dn = 1 (Laplace), u = pp.velocity (Stokes).
std::vector<double> reference_boundary_data(const mesh::TriMesh& mesh, Formulation f, const PhysicalParams& pp);

//! F = sum_j t_j S_j.
Vec3 drag_force(const mesh::TriMesh& mesh, std::span<const double> traction);

}  // namespace bemrelax::bem
