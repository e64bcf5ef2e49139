#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace icdlab {

using cplx = std::complex<double>;

/// Tolerances used by the numerical substrate. Defaults are generous for
/// double-precision closed forms at dimension 4; override per call if needed.
struct Tolerances {
  double herm = 1e-10;
  double psd = 1e-10;
  double rank = 1e-12;
};

inline constexpr Tolerances kTol{};

template <int N>
struct Vec {
  std::array<cplx, N> a{};

  cplx& operator[](int i) { return a[static_cast<std::size_t>(i)]; }
  const cplx& operator[](int i) const { return a[static_cast<std::size_t>(i)]; }

  static constexpr int dim() { return N; }
};

/// Dense complex matrix with dimension fixed at compile time, row-major.
template <int N>
struct Mat {
  std::array<cplx, N * N> a{};

  cplx& operator()(int i, int j) { return a[static_cast<std::size_t>(i * N + j)]; }
  const cplx& operator()(int i, int j) const {
    return a[static_cast<std::size_t>(i * N + j)];
  }

  static constexpr int dim() { return N; }

  static Mat identity() {
    Mat m;
    for (int i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }
};

using Vec4 = Vec<4>;
using Mat2 = Mat<2>;
using Mat4 = Mat<4>;

// ---- elementwise arithmetic -------------------------------------------------

template <int N>
Mat<N> operator+(const Mat<N>& x, const Mat<N>& y) {
  Mat<N> r;
  for (std::size_t k = 0; k < x.a.size(); ++k) r.a[k] = x.a[k] + y.a[k];
  return r;
}

template <int N>
Mat<N> operator-(const Mat<N>& x, const Mat<N>& y) {
  Mat<N> r;
  for (std::size_t k = 0; k < x.a.size(); ++k) r.a[k] = x.a[k] - y.a[k];
  return r;
}

template <int N>
Mat<N> operator*(cplx s, const Mat<N>& x) {
  Mat<N> r;
  for (std::size_t k = 0; k < x.a.size(); ++k) r.a[k] = s * x.a[k];
  return r;
}

template <int N>
Mat<N> operator*(double s, const Mat<N>& x) {
  return cplx(s, 0.0) * x;
}

template <int N>
Vec<N> operator+(const Vec<N>& x, const Vec<N>& y) {
  Vec<N> r;
  for (std::size_t k = 0; k < x.a.size(); ++k) r.a[k] = x.a[k] + y.a[k];
  return r;
}

template <int N>
Vec<N> operator-(const Vec<N>& x, const Vec<N>& y) {
  Vec<N> r;
  for (std::size_t k = 0; k < x.a.size(); ++k) r.a[k] = x.a[k] - y.a[k];
  return r;
}

template <int N>
Vec<N> operator*(cplx s, const Vec<N>& x) {
  Vec<N> r;
  for (std::size_t k = 0; k < x.a.size(); ++k) r.a[k] = s * x.a[k];
  return r;
}

template <int N>
Vec<N> operator*(double s, const Vec<N>& x) {
  return cplx(s, 0.0) * x;
}

template <int N>
Mat<N> mul(const Mat<N>& x, const Mat<N>& y) {
  Mat<N> r;
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < N; ++k) {
      const cplx xik = x(i, k);
      if (xik == cplx{}) continue;
      for (int j = 0; j < N; ++j) r(i, j) += xik * y(k, j);
    }
  return r;
}

template <int N>
Vec<N> mul(const Mat<N>& x, const Vec<N>& v) {
  Vec<N> r;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) r[i] += x(i, j) * v[j];
  return r;
}

template <int N>
Mat<N> adjoint(const Mat<N>& x) {
  Mat<N> r;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) r(i, j) = std::conj(x(j, i));
  return r;
}

template <int N>
Mat<N> transpose(const Mat<N>& x) {
  Mat<N> r;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) r(i, j) = x(j, i);
  return r;
}

template <int N>
Mat<N> conjugate(const Mat<N>& x) {
  Mat<N> r;
  for (std::size_t k = 0; k < x.a.size(); ++k) r.a[k] = std::conj(x.a[k]);
  return r;
}

template <int N>
Vec<N> conjugate(const Vec<N>& v) {
  Vec<N> r;
  for (std::size_t k = 0; k < v.a.size(); ++k) r.a[k] = std::conj(v.a[k]);
  return r;
}

template <int N>
cplx trace(const Mat<N>& x) {
  cplx t = 0.0;
  for (int i = 0; i < N; ++i) t += x(i, i);
  return t;
}

/// <u|v> with the physics convention: antilinear in the first argument.
template <int N>
cplx inner(const Vec<N>& u, const Vec<N>& v) {
  cplx r = 0.0;
  for (int i = 0; i < N; ++i) r += std::conj(u[i]) * v[i];
  return r;
}

template <int N>
double norm(const Vec<N>& v) {
  return std::sqrt(std::real(inner(v, v)));
}

/// |u><v|
template <int N>
Mat<N> outer(const Vec<N>& u, const Vec<N>& v) {
  Mat<N> r;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) r(i, j) = u[i] * std::conj(v[j]);
  return r;
}

template <int N>
Mat<N> projector(const Vec<N>& u) {
  return outer(u, u);
}

template <int N>
double max_abs(const Mat<N>& x) {
  double m = 0.0;
  for (const cplx& e : x.a) m = std::max(m, std::abs(e));
  return m;
}

template <int N>
double max_abs_diff(const Mat<N>& x, const Mat<N>& y) {
  double m = 0.0;
  for (std::size_t k = 0; k < x.a.size(); ++k) m = std::max(m, std::abs(x.a[k] - y.a[k]));
  return m;
}

template <int N>
double max_abs_diff(const Vec<N>& x, const Vec<N>& y) {
  double m = 0.0;
  for (std::size_t k = 0; k < x.a.size(); ++k) m = std::max(m, std::abs(x.a[k] - y.a[k]));
  return m;
}

template <int N>
double frobenius(const Mat<N>& x) {
  double s = 0.0;
  for (const cplx& e : x.a) s += std::norm(e);
  return std::sqrt(s);
}

}  // namespace icdlab
