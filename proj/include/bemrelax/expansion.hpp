#pragma once

/** @file expansion.hpp
 * @brief Solid harmonics and multipole/local expansion operators for 1/r
 *
 * Coefficient arrays hold all (n, m) with 0 <= n <= p, -n <= m <= n at index n*n + n + m.
 * Arrays built from real sources satisfy X_n^{-m} = (-1)^m conj(X_n^m).
 *
 * Conventions (R = regular, I = irregular solid harmonic):
 *   1/|x - y| = sum_{n,m} conj(R_n^m(y - c)) I_n^m(x - c)         (|y - c| < |x - c|)
 *   multipole  M_n^m = sum_j q_j conj(R_n^m(y_j - c)),  phi(x) = sum M_n^m I_n^m(x - c)
 *   local      phi(c + d) = sum L_n^m conj(R_n^m(d))
 * A dipole d at y has potential d.(x - y)/|x - y|^3.
 */

#include <bemrelax/vec3.hpp>

#include <complex>
#include <vector>

namespace bemrelax::fmm {

using cplx = std::complex<double>;

constexpr int num_coefficients(int p) { return (p + 1) * (p + 1); }
constexpr int coef_index(int n, int m) { return n * n + n + m; }

//! R_n^m(x) for 0 <= n <= p, all m; out has num_coefficients(p) entries.
void regular_harmonics(const Vec3& x, int p, cplx* out);
//! I_n^m(x) for 0 <= n <= p, all m; x != 0.
void irregular_harmonics(const Vec3& x, int p, cplx* out);

//! Sets the m < 0 half from the m >= 0 half.
void mirror(int p, cplx* c);

// Raw operators on full arrays. Each handles `count` expansions laid out `stride` apart that share
// one geometry, so the harmonics are computed once. They accumulate into the m >= 0 half of the
// output only; callers mirror() before the result is read as an input.

//! rel = y - c. charges and dipoles hold `count` entries each; either may be null.
void p2m_add(int p, const Vec3& rel, int count, const double* charges, const Vec3* dipoles, cplx* M,
             std::size_t stride);
//! d = child center - parent center.
void m2m_add(int p, int count, const cplx* child, const Vec3& d, cplx* parent, std::size_t stride);
//! d = local center - multipole center; |d| must exceed the sum of both radii for convergence.
void m2l_add(int p, int count, const cplx* M, const Vec3& d, cplx* L, std::size_t stride);
//! d = child center - parent center.
void l2l_add(int p, int count, const cplx* parent, const Vec3& d, cplx* child, std::size_t stride);

//! out[4e] += phi_e, out[4e+1..4e+3] += grad phi_e (when gradient); d = x - local center.
void l2p_add(int p, int count, const cplx* L, std::size_t stride, const Vec3& d, bool gradient, double* out);
//! Same for multipole expansions; d = x - multipole center.
void m2p_add(int p, int count, const cplx* M, std::size_t stride, const Vec3& d, bool gradient, double* out);

//! Owning expansion about a center, with the operators above mirrored on every result.
class Expansion {
 public:
  Expansion(const Vec3& center, int p);

  const Vec3& center() const { return center_; }
  int order() const { return p_; }
  cplx coefficient(int n, int m) const;
  const std::vector<cplx>& coefficients() const { return c_; }

  static Expansion p2m(const Vec3& center, int p, const std::vector<Vec3>& positions,
                       const std::vector<double>& charges, const std::vector<Vec3>& dipoles = {});
  Expansion m2m(const Vec3& parent_center) const;
  Expansion m2l(const Vec3& local_center) const;
  Expansion l2l(const Vec3& child_center) const;
  double m2p(const Vec3& x) const;
  double l2p(const Vec3& x) const;
  Vec3 m2p_gradient(const Vec3& x) const;
  Vec3 l2p_gradient(const Vec3& x) const;

 private:
  Vec3 center_;
  int p_;
  std::vector<cplx> c_;
};

}  // namespace bemrelax::fmm
