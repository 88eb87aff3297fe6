#include <bemrelax/expansion.hpp>
#include <bemrelax/fmm.hpp>

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bemrelax::fmm {

int required_p(double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("required_p: accuracy must lie in (0, 1]");
  return static_cast<int>(std::ceil(-std::log2(eps)));
}

double multipole_error_bound(double sum_abs_q, double r, double a, int p) {
  if (!(r > a)) throw std::invalid_argument("multipole_error_bound: target must lie outside the cluster");
  return sum_abs_q / (r - a) * std::pow(a / r, p + 1);
}

FmmPlan::FmmPlan(std::span<const Vec3> targets, std::span<const Vec3> sources, const FmmParams& params,
                 std::span<const double> source_extents, std::span<const double> source_guards)
    : params_(params), targets_(targets.begin(), targets.end()), num_sources_(sources.size()) {
  if (targets.empty() || sources.empty()) throw std::invalid_argument("FmmPlan: empty target or source set");
  if (!(params.theta >= 0.0 && params.theta < 1.0)) throw std::invalid_argument("FmmPlan: theta must lie in [0, 1)");
  ttree_ = build_tree(targets, params.n_crit);
  stree_ = build_tree(sources, params.n_crit, source_extents, source_guards);

  far_.assign(ttree_.cells.size(), {});
  near_.assign(ttree_.cells.size(), {});
  for (int c = 0; c < static_cast<int>(ttree_.cells.size()); ++c)
    if (ttree_.cells[c].leaf()) target_leaves_.push_back(c);

  // Dual traversal with an explicit stack; pushing children in reverse keeps lists in tree order.
  std::vector<std::pair<int, int>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [ti, sj] = stack.back();
    stack.pop_back();
    const Cell& t = ttree_.cells[ti];
    const Cell& s = stree_.cells[sj];
    const double d = norm(t.center - s.center);
    const double rsum = t.radius + s.radius;
    if (rsum < params.theta * d && d - rsum >= s.guard) {
      far_[ti].push_back(sj);
    } else if (t.leaf() && s.leaf()) {
      near_[ti].push_back(sj);
    } else if (s.leaf() || (!t.leaf() && t.radius >= s.radius)) {
      for (int c = t.child_begin + t.child_count - 1; c >= t.child_begin; --c) stack.emplace_back(c, sj);
    } else {
      for (int c = s.child_begin + s.child_count - 1; c >= s.child_begin; --c) stack.emplace_back(ti, c);
    }
  }
}

int FmmPlan::threads() const { return params_.threads > 0 ? params_.threads : omp_get_max_threads(); }

std::vector<std::size_t> FmmPlan::near_sources(int target_leaf) const {
  std::vector<std::size_t> out;
  for (int sj : near_[target_leaf]) {
    auto b = stree_.bodies(stree_.cells[sj]);
    out.insert(out.end(), b.begin(), b.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> FmmPlan::coverage_counts() const {
  std::vector<std::size_t> cover(targets_.size(), 0);
  for (int leaf : target_leaves_) {
    std::size_t n = 0;
    for (int c = leaf; c >= 0; c = ttree_.cells[c].parent)
      for (int sj : far_[c]) n += stree_.cells[sj].count();
    for (int sj : near_[leaf]) n += stree_.cells[sj].count();
    for (std::size_t t : ttree_.bodies(ttree_.cells[leaf])) cover[t] = n;
  }
  return cover;
}

InteractionCounts FmmPlan::counts() const {
  InteractionCounts k;
  for (std::size_t c = 0; c < far_.size(); ++c) {
    k.far_pairs += far_[c].size();
    k.near_pairs += near_[c].size();
    for (int sj : near_[c]) k.near_interactions += ttree_.cells[c].count() * stree_.cells[sj].count();
  }
  return k;
}

void FmmPlan::far_field(const Emitters& em, const EmitterStrengths& st, int p, bool gradient,
                        std::vector<double>& out) const {
  if (p < 0) throw std::invalid_argument("far_field: order must be >= 0");
  const int E = em.expansions;
  if (em.offsets.size() != num_sources_ + 1) throw std::invalid_argument("far_field: emitter offsets do not match sources");
  const std::size_t npts = em.positions.size();
  if ((!st.charges.empty() && st.charges.size() != npts * E) || (!st.dipoles.empty() && st.dipoles.size() != npts * E))
    throw std::invalid_argument("far_field: strengths do not match emitters");

  out.assign(targets_.size() * E * 4, 0.0);
  const bool any_far = std::any_of(far_.begin(), far_.end(), [](const auto& v) { return !v.empty(); });
  if (!any_far) return;

  const int nth = threads();
  const std::size_t nc = num_coefficients(p);
  const std::size_t block = nc * E;
  const int ns = static_cast<int>(stree_.cells.size());
  std::vector<cplx> M(block * ns, cplx{});
  const double* charges = st.charges.empty() ? nullptr : st.charges.data();
  const Vec3* dipoles = st.dipoles.empty() ? nullptr : st.dipoles.data();

  // Upward pass: P2M at leaves, then M2M level by level.
#pragma omp parallel for num_threads(nth) schedule(dynamic, 4)
  for (int c = 0; c < ns; ++c) {
    const Cell& cell = stree_.cells[c];
    if (!cell.leaf()) continue;
    cplx* m = &M[block * c];
    for (std::size_t b : stree_.bodies(cell))
      for (std::size_t k = em.offsets[b]; k < em.offsets[b + 1]; ++k)
        p2m_add(p, em.positions[k] - cell.center, E, charges ? charges + k * E : nullptr,
                dipoles ? dipoles + k * E : nullptr, m, nc);
    for (int e = 0; e < E; ++e) mirror(p, m + e * nc);
  }
  for (int level = stree_.depth() - 1; level >= 0; --level) {
    const int lo = stree_.level_offsets[level], hi = stree_.level_offsets[level + 1];
#pragma omp parallel for num_threads(nth) schedule(dynamic, 4)
    for (int c = lo; c < hi; ++c) {
      const Cell& cell = stree_.cells[c];
      if (cell.leaf()) continue;
      cplx* m = &M[block * c];
      for (int ch = cell.child_begin; ch < cell.child_begin + cell.child_count; ++ch)
        m2m_add(p, E, &M[block * ch], stree_.cells[ch].center - cell.center, m, nc);
      for (int e = 0; e < E; ++e) mirror(p, m + e * nc);
    }
  }

  const int nleaves = static_cast<int>(target_leaves_.size());
  const std::size_t stride_out = static_cast<std::size_t>(E) * 4;

  if (params_.policy == FarPolicy::Treecode) {
#pragma omp parallel for num_threads(nth) schedule(dynamic, 1)
    for (int li = 0; li < nleaves; ++li) {
      const int leaf = target_leaves_[li];
      std::vector<int> chain;
      for (int c = leaf; c >= 0; c = ttree_.cells[c].parent) chain.push_back(c);
      std::reverse(chain.begin(), chain.end());
      for (std::size_t t : ttree_.bodies(ttree_.cells[leaf])) {
        double* o = &out[t * stride_out];
        for (int c : chain)
          for (int sj : far_[c])
            m2p_add(p, E, &M[block * sj], nc, targets_[t] - stree_.cells[sj].center, gradient, o);
      }
    }
    return;
  }

  // Downward pass: L2L from the parent, then M2L from the far list, level by level.
  const int nt = static_cast<int>(ttree_.cells.size());
  std::vector<cplx> L(block * nt, cplx{});
  std::vector<char> has_local(nt, 0);
  for (int level = 0; level <= ttree_.depth(); ++level) {
    const int lo = ttree_.level_offsets[level], hi = ttree_.level_offsets[level + 1];
#pragma omp parallel for num_threads(nth) schedule(dynamic, 2)
    for (int c = lo; c < hi; ++c) {
      const Cell& cell = ttree_.cells[c];
      cplx* l = &L[block * c];
      bool any = false;
      if (cell.parent >= 0 && has_local[cell.parent]) {
        l2l_add(p, E, &L[block * cell.parent], cell.center - ttree_.cells[cell.parent].center, l, nc);
        any = true;
      }
      for (int sj : far_[c]) {
        m2l_add(p, E, &M[block * sj], cell.center - stree_.cells[sj].center, l, nc);
        any = true;
      }
      if (any)
        for (int e = 0; e < E; ++e) mirror(p, l + e * nc);
      has_local[c] = any;
    }
  }

#pragma omp parallel for num_threads(nth) schedule(dynamic, 4)
  for (int li = 0; li < nleaves; ++li) {
    const int leaf = target_leaves_[li];
    if (!has_local[leaf]) continue;
    const Cell& cell = ttree_.cells[leaf];
    for (std::size_t t : ttree_.bodies(cell))
      l2p_add(p, E, &L[block * leaf], nc, targets_[t] - cell.center, gradient, &out[t * stride_out]);
  }
}

}  // namespace bemrelax::fmm
