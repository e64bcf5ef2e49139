#pragma once

// Takagi factorization of a 4x4 complex-symmetric matrix: a unitary U with
// U tau U^T real diagonal nonnegative. Computed through the real-symmetric
// embedding S = [[X, Y], [Y, -X]] of tau = X + iY, whose eigenpairs
// (a; b) with eigenvalue sigma >= 0 yield Takagi vectors u = a + ib
// satisfying tau conj(u) = sigma u.

#include <algorithm>
#include <cmath>
#include <vector>

#include "icdlab/errors.hpp"
#include "icdlab/linalg.hpp"
#include "icdlab/types.hpp"

namespace icdlab {

struct TakagiResult {
  Mat4 u;                         // unitary; rows are conjugated Takagi vectors
  std::array<double, 4> lambdas;  // nonnegative, descending
};

inline double symmetry_defect(const Mat4& t) {
  double m = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) m = std::max(m, std::abs(t(i, j) - t(j, i)));
  return m;
}

inline TakagiResult takagi(const Mat4& tau, double tol_sym = 1e-10) {
  if (symmetry_defect(tau) > tol_sym)
    throw NotSymmetric("takagi: input is not complex-symmetric within tolerance");

  Mat<8> s;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double x = std::real(tau(i, j));
      const double y = std::imag(tau(i, j));
      s(i, j) = x;
      s(i, j + 4) = y;
      s(i + 4, j) = y;
      s(i + 4, j + 4) = -x;
    }
  const HermitianEig<8> eig = hermitian_eig(s, 1e-9);

  // The spectrum of S comes in +/- pairs. Walk candidates from the largest
  // sigma down; within a near-zero cluster the embedded vectors over-count
  // (u and iu both appear), so keep only candidates that survive complex
  // Gram-Schmidt against the accepted set.
  const double scale = std::max(1.0, frobenius(tau));
  TakagiResult out;
  std::vector<Vec4> accepted;
  int filled = 0;
  for (int k = 0; k < 8 && filled < 4; ++k) {
    const double sigma = eig.values[static_cast<std::size_t>(k)];
    if (sigma < -1e-8 * scale) break;
    Vec4 u;
    for (int i = 0; i < 4; ++i)
      u[i] = cplx(std::real(eig.vectors(i, k)), std::real(eig.vectors(i + 4, k)));
    for (const Vec4& w : accepted) u = u - inner(w, u) * w;
    const double nrm = norm(u);
    if (nrm < 0.3) continue;
    u = (1.0 / nrm) * u;
    accepted.push_back(u);
    out.lambdas[static_cast<std::size_t>(filled)] = std::max(sigma, 0.0);
    for (int j = 0; j < 4; ++j) out.u(filled, j) = std::conj(u[j]);
    ++filled;
  }
  if (filled < 4) throw NotSymmetric("takagi: failed to extract a full Takagi basis");

  // Polish row phases so U tau U^T is real nonnegative on the diagonal.
  const Mat4 d = mul(mul(out.u, tau), transpose(out.u));
  for (int i = 0; i < 4; ++i) {
    const cplx dii = d(i, i);
    if (std::abs(dii) < 1e-14 * scale) continue;
    const cplx ph = std::polar(1.0, -0.5 * std::arg(dii));
    for (int j = 0; j < 4; ++j) out.u(i, j) *= ph;
    out.lambdas[static_cast<std::size_t>(i)] = std::abs(dii);
  }
  return out;
}

}  // namespace icdlab
