#pragma once

// Two-qubit state types and state-level primitives: validated density
// matrices, ensemble mixing, the Wootters spin flip, and PPT diagnostics.
// Basis order is fixed as |00>,|01>,|10>,|11> throughout.

#include <cmath>
#include <vector>

#include "icdlab/errors.hpp"
#include "icdlab/linalg.hpp"
#include "icdlab/types.hpp"

namespace icdlab {

struct PureState {
  Vec4 amplitudes;
};

struct DensityMatrix {
  Mat4 matrix;
};

struct WeightedEnsemble {
  std::vector<double> weights;
  std::vector<PureState> states;
};

inline PureState make_pure(const Vec4& amps, double tol = 1e-10) {
  const double n = norm(amps);
  if (std::abs(n - 1.0) > tol) throw InvalidState("pure state is not normalized");
  return PureState{amps};
}

inline PureState normalized(const Vec4& amps) {
  const double n = norm(amps);
  if (n < 1e-300) throw InvalidState("cannot normalize a zero vector");
  return PureState{(1.0 / n) * amps};
}

/// Validates hermiticity, unit trace, and positivity before wrapping.
inline DensityMatrix make_density(const Mat4& m, double tol = 1e-10) {
  if (hermiticity_defect(m) > tol) throw InvalidState("density matrix is not Hermitian");
  if (std::abs(trace(m) - cplx(1.0)) > tol) throw InvalidState("density matrix trace != 1");
  if (min_eigenvalue(m) < -tol) throw InvalidState("density matrix has a negative eigenvalue");
  return DensityMatrix{m};
}

/// sum_i w_i |s_i><s_i|
inline DensityMatrix mix(const WeightedEnsemble& ensemble, double tol = 1e-10) {
  if (ensemble.weights.size() != ensemble.states.size())
    throw InvalidWeights("ensemble weight/state count mismatch");
  double total = 0.0;
  for (double w : ensemble.weights) {
    if (w < -tol) throw InvalidWeights("negative ensemble weight");
    total += w;
  }
  if (std::abs(total - 1.0) > tol) throw InvalidWeights("ensemble weights do not sum to 1");
  Mat4 m;
  for (std::size_t i = 0; i < ensemble.weights.size(); ++i)
    m = m + std::max(ensemble.weights[i], 0.0) * projector(ensemble.states[i].amplitudes);
  return make_density(m, 1e-9);
}

/// (sigma_y x sigma_y) conj(rho) (sigma_y x sigma_y)
inline Mat4 spin_flip(const Mat4& rho) {
  const Mat4& yy = pauli_yy();
  return mul(mul(yy, conjugate(rho)), yy);
}

inline Mat4 spin_flip(const DensityMatrix& rho) { return spin_flip(rho.matrix); }

/// Spin-flipped pure state |v~> = (sigma_y x sigma_y) conj(|v>).
inline Vec4 spin_flip(const Vec4& v) { return mul(pauli_yy(), conjugate(v)); }

/// Smallest eigenvalue of the partial transpose (subsystem 2 by convention;
/// the spectrum does not depend on the choice).
inline double ppt_min_eigenvalue(const DensityMatrix& rho) {
  return min_eigenvalue(partial_transpose(rho.matrix, 2));
}

/// Peres-Horodecki: in 2x2 PPT is equivalent to separability.
/// Boundary states (PT spectrum touching zero) classify separable.
inline bool is_ppt_separable(const DensityMatrix& rho, double tol_psd = kTol.psd) {
  return ppt_min_eigenvalue(rho) >= -tol_psd;
}

}  // namespace icdlab
