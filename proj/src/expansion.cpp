#include <bemrelax/expansion.hpp>

#include <algorithm>
#include <stdexcept>

namespace bemrelax::fmm {

namespace {

std::vector<cplx>& scratch(int which, std::size_t n) {
  thread_local std::vector<cplx> buf[2];
  if (buf[which].size() < n) buf[which].resize(n);
  return buf[which];
}

//! X_n^m with zero outside |m| <= n.
inline cplx at(const cplx* x, int n, int m) { return (m > n || m < -n) ? cplx{} : x[coef_index(n, m)]; }

}  // namespace

void regular_harmonics(const Vec3& x, int p, cplx* out) {
  const cplx xy{x.x, x.y};
  const double r2 = norm2(x);
  cplx diag{1.0, 0.0};
  for (int m = 0; m <= p; ++m) {
    if (m > 0) diag *= xy / (2.0 * m);
    out[coef_index(m, m)] = diag;
    if (m + 1 <= p) out[coef_index(m + 1, m)] = x.z * diag;
    for (int n = m + 2; n <= p; ++n)
      out[coef_index(n, m)] = ((2.0 * n - 1) * x.z * out[coef_index(n - 1, m)] - r2 * out[coef_index(n - 2, m)]) /
                              static_cast<double>((n + m) * (n - m));
  }
  mirror(p, out);
}

void irregular_harmonics(const Vec3& x, int p, cplx* out) {
  const cplx xy{x.x, x.y};
  const double r2 = norm2(x);
  const double inv_r2 = 1.0 / r2;
  cplx diag{1.0 / std::sqrt(r2), 0.0};
  for (int m = 0; m <= p; ++m) {
    if (m > 0) diag *= (2.0 * m - 1) * xy * inv_r2;
    out[coef_index(m, m)] = diag;
    if (m + 1 <= p) out[coef_index(m + 1, m)] = (2.0 * m + 1) * x.z * diag * inv_r2;
    for (int n = m + 2; n <= p; ++n)
      out[coef_index(n, m)] = ((2.0 * n - 1) * x.z * out[coef_index(n - 1, m)] -
                               static_cast<double>((n - 1) * (n - 1) - m * m) * out[coef_index(n - 2, m)]) *
                              inv_r2;
  }
  mirror(p, out);
}

void mirror(int p, cplx* c) {
  for (int n = 1; n <= p; ++n)
    for (int m = 1; m <= n; ++m) {
      cplx v = std::conj(c[coef_index(n, m)]);
      c[coef_index(n, -m)] = (m & 1) ? -v : v;
    }
}

void p2m_add(int p, const Vec3& rel, int count, const double* charges, const Vec3* dipoles, cplx* M,
             std::size_t stride) {
  auto& R = scratch(0, num_coefficients(p));
  regular_harmonics(rel, p, R.data());
  for (int n = 0; n <= p; ++n)
    for (int m = 0; m <= n; ++m) {
      const cplx r = R[coef_index(n, m)];
      cplx dx{}, dy{}, dz{};
      if (dipoles && n > 0) {
        const cplx lo = at(R.data(), n - 1, m - 1), hi = at(R.data(), n - 1, m + 1);
        dx = 0.5 * (lo - hi);
        dy = cplx{0.0, 0.5} * (lo + hi);
        dz = at(R.data(), n - 1, m);
      }
      for (int e = 0; e < count; ++e) {
        cplx v{};
        if (charges) v += charges[e] * r;
        if (dipoles) v += dipoles[e].x * dx + dipoles[e].y * dy + dipoles[e].z * dz;
        M[e * stride + coef_index(n, m)] += std::conj(v);
      }
    }
}

void m2m_add(int p, int count, const cplx* child, const Vec3& d, cplx* parent, std::size_t stride) {
  // M_n^m(c) = sum_{k,l} conj(R_k^l(c' - c)) M_{n-k}^{m-l}(c')
  auto& R = scratch(0, num_coefficients(p));
  regular_harmonics(d, p, R.data());
  for (int e = 0; e < count; ++e) {
    const cplx* src = child + e * stride;
    cplx* dst = parent + e * stride;
    for (int n = 0; n <= p; ++n)
      for (int m = 0; m <= n; ++m) {
        cplx s{};
        for (int k = 0; k <= n; ++k) {
          const int j = n - k;
          const int lmin = std::max(-k, m - j), lmax = std::min(k, m + j);
          for (int l = lmin; l <= lmax; ++l) s += std::conj(R[coef_index(k, l)]) * src[coef_index(j, m - l)];
        }
        dst[coef_index(n, m)] += s;
      }
  }
}

void m2l_add(int p, int count, const cplx* M, const Vec3& d, cplx* L, std::size_t stride) {
  // L_k^l = (-1)^k sum_{n <= p-k, m} M_n^m I_{n+k}^{m+l}(d)
  auto& I = scratch(0, num_coefficients(2 * p));
  irregular_harmonics(d, 2 * p, I.data());
  for (int e = 0; e < count; ++e) {
    const cplx* src = M + e * stride;
    cplx* dst = L + e * stride;
    for (int k = 0; k <= p; ++k)
      for (int l = 0; l <= k; ++l) {
        cplx s{};
        for (int n = 0; n <= p - k; ++n) {
          const cplx* mrow = src + coef_index(n, 0);
          const cplx* irow = I.data() + coef_index(n + k, l);
          for (int m = -n; m <= n; ++m) s += mrow[m] * irow[m];
        }
        dst[coef_index(k, l)] += (k & 1) ? -s : s;
      }
  }
}

void l2l_add(int p, int count, const cplx* parent, const Vec3& d, cplx* child, std::size_t stride) {
  // L'_a^b = sum_{j,s} L_{a+j}^{b+s} conj(R_j^s(d))
  auto& R = scratch(0, num_coefficients(p));
  regular_harmonics(d, p, R.data());
  for (int e = 0; e < count; ++e) {
    const cplx* src = parent + e * stride;
    cplx* dst = child + e * stride;
    for (int a = 0; a <= p; ++a)
      for (int b = 0; b <= a; ++b) {
        cplx s{};
        for (int j = 0; j <= p - a; ++j) {
          const int n = a + j;
          const int smin = std::max(-j, -n - b), smax = std::min(j, n - b);
          for (int t = smin; t <= smax; ++t) s += src[coef_index(n, b + t)] * std::conj(R[coef_index(j, t)]);
        }
        dst[coef_index(a, b)] += s;
      }
  }
}

void l2p_add(int p, int count, const cplx* L, std::size_t stride, const Vec3& d, bool gradient, double* out) {
  auto& R = scratch(0, num_coefficients(p));
  regular_harmonics(d, p, R.data());
  for (int e = 0; e < count; ++e) {
    const cplx* c = L + e * stride;
    double phi = 0, gx = 0, gy = 0, gz = 0;
    for (int n = 0; n <= p; ++n)
      for (int m = 0; m <= n; ++m) {
        const double w = m ? 2.0 : 1.0;
        const cplx y = std::conj(R[coef_index(n, m)]);
        phi += w * (c[coef_index(n, m)] * y).real();
        if (gradient && n < p) {
          const cplx hi = c[coef_index(n + 1, m + 1)], lo = c[coef_index(n + 1, m - 1)];
          gx += w * (0.5 * (hi - lo) * y).real();
          gy += w * (cplx{0.0, -0.5} * (hi + lo) * y).real();
          gz += w * (c[coef_index(n + 1, m)] * y).real();
        }
      }
    double* o = out + 4 * e;
    o[0] += phi;
    if (gradient) {
      o[1] += gx;
      o[2] += gy;
      o[3] += gz;
    }
  }
}

void m2p_add(int p, int count, const cplx* M, std::size_t stride, const Vec3& d, bool gradient, double* out) {
  const int q = gradient ? p + 1 : p;
  auto& I = scratch(0, num_coefficients(q));
  irregular_harmonics(d, q, I.data());
  for (int e = 0; e < count; ++e) {
    const cplx* c = M + e * stride;
    double* o = out + 4 * e;
    double phi = 0;
    for (int n = 0; n <= p; ++n)
      for (int m = 0; m <= n; ++m) phi += (m ? 2.0 : 1.0) * (c[coef_index(n, m)] * I[coef_index(n, m)]).real();
    o[0] += phi;
    if (!gradient) continue;
    double gx = 0, gy = 0, gz = 0;
    for (int k = 1; k <= p + 1; ++k)
      for (int l = 0; l <= k; ++l) {
        const double w = l ? 2.0 : 1.0;
        const cplx t = I[coef_index(k, l)];
        const cplx lo = at(c, k - 1, l - 1), hi = at(c, k - 1, l + 1);
        gx += w * (-0.5 * (lo - hi) * t).real();
        gy += w * (cplx{0.0, 0.5} * (lo + hi) * t).real();
        gz -= w * (at(c, k - 1, l) * t).real();
      }
    o[1] += gx;
    o[2] += gy;
    o[3] += gz;
  }
}

Expansion::Expansion(const Vec3& center, int p) : center_(center), p_(p) {
  if (p < 0) throw std::invalid_argument("expansion order must be >= 0");
  c_.assign(num_coefficients(p), cplx{});
}

cplx Expansion::coefficient(int n, int m) const {
  if (n < 0 || n > p_ || m < -n || m > n) throw std::out_of_range("expansion coefficient index");
  return c_[coef_index(n, m)];
}

Expansion Expansion::p2m(const Vec3& center, int p, const std::vector<Vec3>& positions,
                         const std::vector<double>& charges, const std::vector<Vec3>& dipoles) {
  if (charges.size() != positions.size() || (!dipoles.empty() && dipoles.size() != positions.size()))
    throw std::invalid_argument("p2m: source arrays differ in length");
  Expansion e(center, p);
  for (std::size_t j = 0; j < positions.size(); ++j)
    p2m_add(p, positions[j] - center, 1, &charges[j], dipoles.empty() ? nullptr : &dipoles[j], e.c_.data(), 0);
  mirror(p, e.c_.data());
  return e;
}

Expansion Expansion::m2m(const Vec3& parent_center) const {
  Expansion e(parent_center, p_);
  m2m_add(p_, 1, c_.data(), center_ - parent_center, e.c_.data(), 0);
  mirror(p_, e.c_.data());
  return e;
}

Expansion Expansion::m2l(const Vec3& local_center) const {
  Expansion e(local_center, p_);
  m2l_add(p_, 1, c_.data(), local_center - center_, e.c_.data(), 0);
  mirror(p_, e.c_.data());
  return e;
}

Expansion Expansion::l2l(const Vec3& child_center) const {
  Expansion e(child_center, p_);
  l2l_add(p_, 1, c_.data(), child_center - center_, e.c_.data(), 0);
  mirror(p_, e.c_.data());
  return e;
}

double Expansion::m2p(const Vec3& x) const {
  double out[4] = {};
  m2p_add(p_, 1, c_.data(), 0, x - center_, false, out);
  return out[0];
}

double Expansion::l2p(const Vec3& x) const {
  double out[4] = {};
  l2p_add(p_, 1, c_.data(), 0, x - center_, false, out);
  return out[0];
}

Vec3 Expansion::m2p_gradient(const Vec3& x) const {
  double out[4] = {};
  m2p_add(p_, 1, c_.data(), 0, x - center_, true, out);
  return {out[1], out[2], out[3]};
}

Vec3 Expansion::l2p_gradient(const Vec3& x) const {
  double out[4] = {};
  l2p_add(p_, 1, c_.data(), 0, x - center_, true, out);
  return {out[1], out[2], out[3]};
}

}  // namespace bemrelax::fmm
