#pragma once

// General Wootters machinery for arbitrary two-qubit density matrices:
// concurrence and entanglement of formation, subnormalized eigenvector
// ensembles, the complex-symmetric tau matrix, and the tilde-orthogonal
// x-vector decomposition obtained from a Takagi factorization.

#include <algorithm>
#include <cmath>
#include <vector>

#include "icdlab/errors.hpp"
#include "icdlab/linalg.hpp"
#include "icdlab/qstate.hpp"
#include "icdlab/takagi.hpp"
#include "icdlab/types.hpp"

namespace icdlab {

enum class LogBase { Two, Natural };

struct ConcurrenceReport {
  std::array<double, 4> lambdas{};  // descending
  double concurrence = 0.0;
  double eof = 0.0;
};

struct SubnormalizedSet {
  std::vector<Vec4> vectors;  // norms^2 are the ensemble weights
};

/// Binary entropy of x in the requested base, continuous at 0 and 1.
inline double binary_entropy(double x, LogBase base = LogBase::Two) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double h = -x * std::log(x) - (1.0 - x) * std::log(1.0 - x);
  return base == LogBase::Two ? h / std::log(2.0) : h;
}

/// H(1/2 + 1/2 sqrt(1 - c^2)).
inline double eof_from_concurrence(double c, LogBase base = LogBase::Two) {
  if (c < -1e-12 || c > 1.0 + 1e-12)
    throw OutOfRange("eof_from_concurrence: concurrence outside [0,1]");
  c = std::clamp(c, 0.0, 1.0);
  const double x = 0.5 + 0.5 * std::sqrt(std::max(0.0, 1.0 - c * c));
  return binary_entropy(x, base);
}

/// Concurrence of a subnormalized pure vector: |<v|v~>| = <v|v> C(v/|v|).
inline double tilde_overlap(const Vec4& v) { return std::abs(inner(v, spin_flip(v))); }

/// lambda_i are square roots of the eigenvalues of rho rho~, computed through
/// the Hermitian similarity sqrt(rho) rho~ sqrt(rho).
inline ConcurrenceReport concurrence_general(const DensityMatrix& rho,
                                             LogBase base = LogBase::Two) {
  const Mat4 root = psd_sqrt(rho.matrix);
  const Mat4 m = mul(mul(root, spin_flip(rho)), root);
  const HermitianEig<4> eig = hermitian_eig(m, 1e-9);
  ConcurrenceReport rep;
  for (int i = 0; i < 4; ++i) {
    double lam = eig.values[static_cast<std::size_t>(i)];
    // Eigenvalue noise of true zeros sits near 1e-17 and the square root
    // amplifies it to 1e-9 per mode; flush it before taking the root.
    if (lam < 1e-15) lam = 0.0;
    rep.lambdas[static_cast<std::size_t>(i)] = std::sqrt(lam);
  }
  rep.concurrence = std::max(
      0.0, rep.lambdas[0] - rep.lambdas[1] - rep.lambdas[2] - rep.lambdas[3]);
  rep.concurrence = std::min(rep.concurrence, 1.0);
  rep.eof = eof_from_concurrence(rep.concurrence, base);
  return rep;
}

/// |v_i> = sqrt(p_i) |psi_i> from the spectral decomposition;
/// zero-eigenvalue vectors are dropped.
inline SubnormalizedSet subnormalized_eigenvectors(const DensityMatrix& rho,
                                                   double drop_tol = 1e-12) {
  const HermitianEig<4> eig = hermitian_eig(rho.matrix);
  SubnormalizedSet set;
  for (int k = 0; k < 4; ++k) {
    const double p = eig.values[static_cast<std::size_t>(k)];
    if (p <= drop_tol) continue;
    Vec4 v;
    for (int i = 0; i < 4; ++i) v[i] = std::sqrt(p) * eig.vectors(i, k);
    set.vectors.push_back(v);
  }
  return set;
}

/// tau_ij = <v_i|v~_j>: the overlap of v_i with the spin-flipped v_j.
/// Complex-symmetric by construction; padded to 4x4 for rank-deficient sets.
inline Mat4 tau_matrix(const SubnormalizedSet& vset) {
  const int n = static_cast<int>(vset.vectors.size());
  Mat4 t;
  for (int i = 0; i < n; ++i) {
    const std::size_t si = static_cast<std::size_t>(i);
    for (int j = i; j < n; ++j) {
      const cplx tij = inner(vset.vectors[si], spin_flip(vset.vectors[static_cast<std::size_t>(j)]));
      t(i, j) = tij;
      t(j, i) = tij;
    }
  }
  return t;
}

/// x_i = sum_j conj(U_ij) v_j, satisfying <x_i|x~_j> = lambda_i delta_ij.
inline SubnormalizedSet x_vectors(const SubnormalizedSet& vset, const TakagiResult& tk) {
  SubnormalizedSet out;
  out.vectors.resize(4);
  const int n = static_cast<int>(vset.vectors.size());
  for (int i = 0; i < 4; ++i) {
    Vec4 x;
    for (int j = 0; j < n; ++j)
      x = x + std::conj(tk.u(i, j)) * vset.vectors[static_cast<std::size_t>(j)];
    out.vectors[static_cast<std::size_t>(i)] = x;
  }
  return out;
}

/// The minimizing pure-state ensemble: phase the x-vectors (largest-lambda
/// member real, the rest rotated by i) and mix them with Hadamard signs.
/// Its average concurrence equals max(0, l1-l2-l3-l4) when that is >= 0.
inline SubnormalizedSet wootters_optimal_vectors(const DensityMatrix& rho) {
  const SubnormalizedSet vset = subnormalized_eigenvectors(rho);
  const TakagiResult tk = takagi(tau_matrix(vset));
  const SubnormalizedSet xs = x_vectors(vset, tk);

  static constexpr int kSigns[4][4] = {
      {1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}};
  SubnormalizedSet out;
  out.vectors.resize(4);
  for (int a = 0; a < 4; ++a) {
    Vec4 z;
    for (int j = 0; j < 4; ++j) {
      const cplx phase = (j == 0) ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
      z = z + (0.5 * kSigns[a][j]) * (phase * xs.vectors[static_cast<std::size_t>(j)]);
    }
    out.vectors[static_cast<std::size_t>(a)] = z;
  }
  return out;
}

/// Average concurrence sum_i <y_i|y_i> C(y_i/|y_i|) of a subnormalized ensemble.
inline double average_concurrence(const SubnormalizedSet& set) {
  double s = 0.0;
  for (const Vec4& v : set.vectors) s += tilde_overlap(v);
  return s;
}

}  // namespace icdlab
