#pragma once

// Small-dimension complex linear algebra: Kronecker products, Hermitian
// eigendecomposition by cyclic Jacobi, PSD square roots, partial transposes,
// dual bases and range-restricted inverses. Everything here is exact-dimension
// (2, 4, or 8) and dependency-free.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "icdlab/errors.hpp"
#include "icdlab/types.hpp"

namespace icdlab {

/// Kronecker product in basis order |00>,|01>,|10>,|11>.
inline Mat4 tensor(const Mat2& x, const Mat2& y) {
  Mat4 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) r(2 * i + k, 2 * j + l) = x(i, j) * y(k, l);
  return r;
}

inline Vec4 tensor(const Vec<2>& x, const Vec<2>& y) {
  Vec4 r;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) r[2 * i + k] = x[i] * y[k];
  return r;
}

inline Mat2 pauli_y() {
  Mat2 m;
  m(0, 1) = cplx(0.0, -1.0);
  m(1, 0) = cplx(0.0, 1.0);
  return m;
}

/// sigma_y (x) sigma_y; the spin-flip kernel. Real, symmetric, involutory.
inline const Mat4& pauli_yy() {
  static const Mat4 m = tensor(pauli_y(), pauli_y());
  return m;
}

template <int N>
double hermiticity_defect(const Mat<N>& h) {
  double m = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = i; j < N; ++j) m = std::max(m, std::abs(h(i, j) - std::conj(h(j, i))));
  return m;
}

template <int N>
struct HermitianEig {
  std::array<double, N> values{};  // descending
  Mat<N> vectors;                  // columns, orthonormal
};

namespace detail {

// One cyclic sweep target: annihilate h(p,q) with a complex Givens rotation.
// W acts on columns (p,q) as [[c, s], [-s e^{-i phi}, c e^{-i phi}]].
template <int N>
void jacobi_rotate(Mat<N>& h, Mat<N>* v, int p, int q) {
  const cplx hpq = h(p, q);
  const double r = std::abs(hpq);
  if (r == 0.0) return;
  const double phi = std::arg(hpq);
  const double app = std::real(h(p, p));
  const double aqq = std::real(h(q, q));
  const double theta = 0.5 * (aqq - app) / r;
  double t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
  if (theta < 0.0) t = -t;
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const cplx em = std::polar(1.0, -phi);  // e^{-i phi}
  const cplx ep = std::conj(em);

  // h <- W^dag h W
  for (int k = 0; k < N; ++k) {
    const cplx hkp = h(k, p), hkq = h(k, q);
    h(k, p) = c * hkp - s * em * hkq;
    h(k, q) = s * hkp + c * em * hkq;
  }
  for (int k = 0; k < N; ++k) {
    const cplx hpk = h(p, k), hqk = h(q, k);
    h(p, k) = c * hpk - s * ep * hqk;
    h(q, k) = s * hpk + c * ep * hqk;
  }
  h(p, p) = cplx(std::real(h(p, p)), 0.0);
  h(q, q) = cplx(std::real(h(q, q)), 0.0);
  h(p, q) = 0.0;
  h(q, p) = 0.0;

  if (v != nullptr) {
    for (int k = 0; k < N; ++k) {
      const cplx vkp = (*v)(k, p), vkq = (*v)(k, q);
      (*v)(k, p) = c * vkp - s * em * vkq;
      (*v)(k, q) = s * vkp + c * em * vkq;
    }
  }
}

template <int N>
double offdiag_frobenius(const Mat<N>& h) {
  double s = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (i != j) s += std::norm(h(i, j));
  return std::sqrt(s);
}

// Cyclic Jacobi sweeps until the off-diagonal mass is negligible.
template <int N>
void jacobi_diagonalize(Mat<N>& h, Mat<N>* v) {
  const double scale = std::max(1.0, frobenius(h));
  constexpr int kMaxSweeps = 64;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (offdiag_frobenius(h) < 1e-14 * scale) break;
    for (int p = 0; p < N; ++p)
      for (int q = p + 1; q < N; ++q) jacobi_rotate(h, v, p, q);
  }
}

// Global phase convention: component of largest modulus made real-positive.
template <int N>
void fix_column_phase(Mat<N>& v, int col) {
  int best = 0;
  double mb = 0.0;
  for (int i = 0; i < N; ++i) {
    const double m = std::abs(v(i, col));
    if (m > mb) {
      mb = m;
      best = i;
    }
  }
  if (mb < 1e-300) return;
  const cplx ph = std::polar(1.0, -std::arg(v(best, col)));
  for (int i = 0; i < N; ++i) v(i, col) *= ph;
}

}  // namespace detail

/// Full Hermitian eigendecomposition, spectrum sorted descending.
template <int N>
HermitianEig<N> hermitian_eig(const Mat<N>& h, double tol_herm = kTol.herm) {
  if (hermiticity_defect(h) > tol_herm)
    throw NotHermitian("hermitian_eig: input is not Hermitian within tolerance");
  Mat<N> d = h;
  Mat<N> v = Mat<N>::identity();
  detail::jacobi_diagonalize(d, &v);

  std::array<int, N> order{};
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return std::real(d(i, i)) > std::real(d(j, j)); });

  HermitianEig<N> out;
  for (int k = 0; k < N; ++k) {
    out.values[static_cast<std::size_t>(k)] = std::real(d(order[static_cast<std::size_t>(k)],
                                                          order[static_cast<std::size_t>(k)]));
    for (int i = 0; i < N; ++i) out.vectors(i, k) = v(i, order[static_cast<std::size_t>(k)]);
    detail::fix_column_phase(out.vectors, k);
  }
  return out;
}

/// Eigenvalues only (descending); skips eigenvector accumulation and the
/// hermiticity check. Hot path for feasibility predicates.
template <int N>
std::array<double, N> hermitian_eigenvalues(Mat<N> h) {
  detail::jacobi_diagonalize(h, static_cast<Mat<N>*>(nullptr));
  std::array<double, N> vals{};
  for (int i = 0; i < N; ++i) vals[static_cast<std::size_t>(i)] = std::real(h(i, i));
  std::sort(vals.begin(), vals.end(), std::greater<>());
  return vals;
}

template <int N>
double min_eigenvalue(const Mat<N>& h) {
  return hermitian_eigenvalues(h)[N - 1];
}

/// Hermitian PSD square root. Eigenvalues in [-tol_psd, 0) are clamped to 0.
template <int N>
Mat<N> psd_sqrt(const Mat<N>& h, double tol_psd = kTol.psd, double tol_herm = kTol.herm) {
  HermitianEig<N> eig = hermitian_eig(h, tol_herm);
  Mat<N> r;
  for (int k = 0; k < N; ++k) {
    double lam = eig.values[static_cast<std::size_t>(k)];
    if (lam < -tol_psd) throw NotPSD("psd_sqrt: negative eigenvalue beyond tolerance");
    lam = std::sqrt(std::max(lam, 0.0));
    if (lam == 0.0) continue;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        r(i, j) += lam * eig.vectors(i, k) * std::conj(eig.vectors(j, k));
  }
  return r;
}

/// Partial transpose over the chosen qubit (1 or 2) in the 2x2 product basis.
/// A pure entry permutation, hence an exact involution.
inline Mat4 partial_transpose(const Mat4& rho, int subsystem = 2) {
  Mat4 r;
  for (int i1 = 0; i1 < 2; ++i1)
    for (int i2 = 0; i2 < 2; ++i2)
      for (int j1 = 0; j1 < 2; ++j1)
        for (int j2 = 0; j2 < 2; ++j2) {
          if (subsystem == 2)
            r(2 * i1 + j2, 2 * j1 + i2) = rho(2 * i1 + i2, 2 * j1 + j2);
          else
            r(2 * j1 + i2, 2 * i1 + j2) = rho(2 * i1 + i2, 2 * j1 + j2);
        }
  return r;
}

// ---- runtime-sized helpers for spans of up to 4 vectors ---------------------

namespace detail {

/// k x k complex matrix, k <= 4, stored dense.
struct KMat {
  int n = 0;
  std::array<cplx, 16> a{};
  cplx& operator()(int i, int j) { return a[static_cast<std::size_t>(i * n + j)]; }
  const cplx& operator()(int i, int j) const {
    return a[static_cast<std::size_t>(i * n + j)];
  }
};

/// Gauss-Jordan inverse with partial pivoting. Returns |det| through det_mag.
inline bool invert(KMat m, KMat& out, double& det_mag) {
  const int n = m.n;
  out.n = n;
  out.a = {};
  for (int i = 0; i < n; ++i) out(i, i) = 1.0;
  det_mag = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
    if (piv != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(m(col, j), m(piv, j));
        std::swap(out(col, j), out(piv, j));
      }
    }
    const cplx d = m(col, col);
    det_mag *= std::abs(d);
    if (std::abs(d) < 1e-300) return false;
    for (int j = 0; j < n; ++j) {
      m(col, j) /= d;
      out(col, j) /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const cplx f = m(r, col);
      if (f == cplx{}) continue;
      for (int j = 0; j < n; ++j) {
        m(r, j) -= f * m(col, j);
        out(r, j) -= f * out(col, j);
      }
    }
  }
  return true;
}

inline KMat gram(const std::vector<Vec4>& vecs) {
  KMat g;
  g.n = static_cast<int>(vecs.size());
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      g(i, j) = inner(vecs[static_cast<std::size_t>(i)], vecs[static_cast<std::size_t>(j)]);
  return g;
}

}  // namespace detail

/// Dual vectors of a linearly independent set: <dual_i|v_j> = delta_ij and
/// sum_i |dual_i><v_i| acts as identity on the span.
inline std::vector<Vec4> dual_basis(const std::vector<Vec4>& vecs,
                                    double tol_rank = kTol.rank) {
  const int n = static_cast<int>(vecs.size());
  detail::KMat g = detail::gram(vecs);
  detail::KMat gi;
  double det_mag = 0.0;
  if (!detail::invert(g, gi, det_mag) || det_mag <= tol_rank)
    throw RankDeficient("dual_basis: Gram determinant below tolerance");
  std::vector<Vec4> duals(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Vec4 d;
    for (int j = 0; j < n; ++j) d = d + gi(j, i) * vecs[static_cast<std::size_t>(j)];
    duals[static_cast<std::size_t>(i)] = d;
  }
  return duals;
}

/// Inverse of m restricted to the span of range_basis, expanded in dual
/// vectors: with m = sum a_ij |phi_i><phi_j|, the result is
/// sum (a^-1)_ij |dual_i><dual_j|, so that m * result = identity on the span.
inline Mat4 restricted_inverse(const Mat4& m, const std::vector<Vec4>& range_basis,
                               double tol_rank = kTol.rank) {
  const int n = static_cast<int>(range_basis.size());
  const std::vector<Vec4> duals = dual_basis(range_basis, tol_rank);
  // a_ij = <dual_i| m |dual_j>
  detail::KMat coeff;
  coeff.n = n;
  for (int j = 0; j < n; ++j) {
    const Vec4 mdj = mul(m, duals[static_cast<std::size_t>(j)]);
    for (int i = 0; i < n; ++i) coeff(i, j) = inner(duals[static_cast<std::size_t>(i)], mdj);
  }
  detail::KMat binv;
  double det_mag = 0.0;
  if (!detail::invert(coeff, binv, det_mag) || det_mag <= tol_rank)
    throw SingularOnRange("restricted_inverse: coefficient matrix not invertible");
  Mat4 out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out = out + binv(i, j) * outer(duals[static_cast<std::size_t>(i)],
                                     duals[static_cast<std::size_t>(j)]);
  return out;
}

}  // namespace icdlab
