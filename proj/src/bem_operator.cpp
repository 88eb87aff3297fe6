#include <bemrelax/bem.hpp>

#include <stdexcept>
#include <string>

namespace bemrelax::bem {

using kernels::KernelKind;

std::string_view name(Formulation f) {
  switch (f) {
    case Formulation::Laplace1stKind: return "laplace1";
    case Formulation::Laplace2ndKind: return "laplace2";
    case Formulation::StokesTraction1stKind: return "stokes";
  }
  return "?";
}

namespace {

constexpr double kInward = -1.0;
constexpr double kOutward = 1.0;

}  // namespace

std::unique_ptr<LayerOperator> make_operator(const mesh::TriMesh& mesh, Formulation f, const PhysicalParams& pp,
                                             const OperatorConfig& cfg) {
  switch (f) {
    case Formulation::Laplace1stKind:
      return std::make_unique<LayerOperator>(mesh, KernelKind::LaplaceSingle, 1.0, 0.0, kInward, cfg);
    case Formulation::Laplace2ndKind:
      return std::make_unique<LayerOperator>(mesh, KernelKind::LaplaceDouble, 1.0, 0.5, kInward, cfg);
    case Formulation::StokesTraction1stKind:
      if (!(pp.mu > 0)) throw std::invalid_argument("viscosity must be positive");
      return std::make_unique<LayerOperator>(mesh, KernelKind::Stokeslet, -1.0 / (8.0 * kPi * pp.mu), 0.0, kOutward,
                                             cfg);
  }
  throw std::invalid_argument("unknown formulation");
}

std::vector<double> assemble_rhs(const mesh::TriMesh& mesh, Formulation f, std::span<const double> data,
                                 const PhysicalParams& pp, const OperatorConfig& cfg, int p) {
  const std::size_t expected = mesh.size() * unknowns_per_panel(f);
  if (data.size() != expected)
    throw std::invalid_argument("assemble_rhs: boundary data has " + std::to_string(data.size()) +
                                " values, expected " + std::to_string(expected));
  // The known-side operator is applied once, so its near field is never cached.
  OperatorConfig once = cfg;
  once.near_cache_budget = 0;
  std::unique_ptr<LayerOperator> known;
  switch (f) {
    case Formulation::Laplace1stKind:  // 1/2 phi + D phi
      known = std::make_unique<LayerOperator>(mesh, KernelKind::LaplaceDouble, 1.0, 0.5, kInward, once);
      break;
    case Formulation::Laplace2ndKind:  // S dphi/dn
      known = std::make_unique<LayerOperator>(mesh, KernelKind::LaplaceSingle, 1.0, 0.0, kInward, once);
      break;
    case Formulation::StokesTraction1stKind:  // 1/2 u - 1/(8 pi) T u
      (void)pp;
      known = std::make_unique<LayerOperator>(mesh, KernelKind::Stresslet, -1.0 / (8.0 * kPi), 0.5, kOutward, once);
      break;
  }
  std::vector<double> b(expected);
  known->apply(data, p, b);
  return b;
}

std::vector<double> reference_boundary_data(const mesh::TriMesh& mesh, Formulation f, const PhysicalParams& pp) {
  if (f != Formulation::StokesTraction1stKind) return std::vector<double>(mesh.size(), 1.0);
  std::vector<double> u(3 * mesh.size());
  for (std::size_t j = 0; j < mesh.size(); ++j)
    for (int c = 0; c < 3; ++c) u[3 * j + c] = pp.velocity[c];
  return u;
}

Vec3 drag_force(const mesh::TriMesh& mesh, std::span<const double> traction) {
  if (traction.size() != 3 * mesh.size()) throw std::invalid_argument("drag_force: traction must hold 3 values per panel");
  Vec3 f;
  for (std::size_t j = 0; j < mesh.size(); ++j) {
    const double s = mesh.panels()[j].area;
    f += Vec3{traction[3 * j] * s, traction[3 * j + 1] * s, traction[3 * j + 2] * s};
  }
  return f;
}

}  // namespace bemrelax::bem
