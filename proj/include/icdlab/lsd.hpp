#pragma once

// Closed-form Lewenstein-Sanpera decomposition for entangled ICD states:
// maximal separable weight, boundary separable part, the Wootters product
// ensemble realizing the best separable approximation, and a numerical
// verifier for the single and pairwise maximality conditions, including the
// rank-deficient and rank-2 branches.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "icdlab/concurrence.hpp"
#include "icdlab/errors.hpp"
#include "icdlab/icd.hpp"
#include "icdlab/linalg.hpp"
#include "icdlab/qstate.hpp"
#include "icdlab/types.hpp"

namespace icdlab {

struct LSDecomposition {
  double lambda = 0.0;      // separable weight
  ICDParams params;         // the decomposed point
  ICDParams sep_params;     // boundary coordinates p' of the separable part
  PureState pure_part;      // the region's iso-concurrence vertex state
  WeightedEnsemble bsa;     // product ensemble; weights sum to lambda
  Region region = Region::Entangled1;
};

enum class LSBranch { FullRank, P2Zero, P3Zero, P4Zero, Rank2 };

inline std::string to_string(LSBranch b) {
  switch (b) {
    case LSBranch::FullRank: return "FullRank";
    case LSBranch::P2Zero: return "P2Zero";
    case LSBranch::P3Zero: return "P3Zero";
    case LSBranch::P4Zero: return "P4Zero";
    case LSBranch::Rank2: return "Rank2";
  }
  return "?";
}

struct CheckResult {
  bool pass = false;
  double residual = 0.0;
};

struct OptimalityVerdict {
  std::array<CheckResult, 4> single_maximality{};
  std::array<CheckResult, 6> pair_maximality{};
  CheckResult reconstruction{};
  CheckResult separable_part{};  // PSD + boundary placement of rho_s
  LSBranch branch = LSBranch::FullRank;
  bool overall = false;
};

namespace detail {

/// lambda and p' in region-1 position. Assumes the region-1 inequality is
/// violated; lambda < 1 exactly characterizes that.
inline double region1_lambda(const std::array<double, 4>& p, double s) {
  const double s2 = s * s;
  if (s2 < 1e-12) throw ThetaBoundary("sin(2 theta) too small for the L-S closed form");
  return 1.0 - p[0] + p[1] +
         std::sqrt(4.0 * p[2] * p[3] / s2 + (p[2] - p[3]) * (p[2] - p[3]));
}

/// Subnormalized x-vectors of an ICD state in the family basis, using the
/// analytic block unitary. Entries follow the descending lambda order of
/// unitary_U_icd, so index 0 always carries the largest singular value.
inline SubnormalizedSet icd_x_vectors(const ICDParams& params) {
  const std::array<PureState, 4> basis = icd_basis(params.theta);
  SubnormalizedSet vset;
  vset.vectors.resize(4);
  for (int i = 0; i < 4; ++i)
    vset.vectors[static_cast<std::size_t>(i)] =
        std::sqrt(params.p[static_cast<std::size_t>(i)]) * basis[static_cast<std::size_t>(i)].amplitudes;
  return x_vectors(vset, unitary_U_icd(params));
}

}  // namespace detail

/// The Wootters product vectors z_1..z_4 of a marginal separable ICD state:
/// phase the x-vectors (largest-lambda member untouched, the rest rotated
/// by i) and combine with Hadamard signs. On the boundary every z is a
/// product vector and sum_a |z_a><z_a| = rho_s.
inline SubnormalizedSet boundary_product_vectors(const ICDParams& sep_params,
                                                 double boundary_tol = 1e-9) {
  const ICDLambdas lam = lambda_spectrum_icd(sep_params);
  const double defect =
      lam.sorted[0] - lam.sorted[1] - lam.sorted[2] - lam.sorted[3];
  if (std::abs(defect) > boundary_tol)
    throw NotOnBoundary("separable part is not marginal: lambda constraint violated");

  const SubnormalizedSet xs = detail::icd_x_vectors(sep_params);
  static constexpr int kSigns[4][4] = {
      {1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}};
  SubnormalizedSet zs;
  zs.vectors.resize(4);
  for (int a = 0; a < 4; ++a) {
    Vec4 z;
    for (int j = 0; j < 4; ++j) {
      const cplx phase = (j == 0) ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
      z = z + (0.5 * kSigns[a][j]) * (phase * xs.vectors[static_cast<std::size_t>(j)]);
    }
    zs.vectors[static_cast<std::size_t>(a)] = z;
  }
  return zs;
}

/// Closed-form L-S decomposition of an entangled ICD state. Regions 2-4 are
/// mapped into region-1 position, decomposed there, and mapped back; the
/// pure part is then the region's own vertex state.
inline LSDecomposition lsd_closed_form(const ICDParams& params) {
  const RegionLabel label = classify_region(params);
  if (label.kind == Region::Separable)
    throw NotRegion1("state is separable; no entangled pure part to split off");

  const std::array<int, 4> perm = region_permutation(label.kind);
  const ICDParams q = permute_params(params, perm);
  const double s = q.sin2theta();
  const double lambda = detail::region1_lambda(q.p, s);

  LSDecomposition d;
  d.lambda = std::clamp(lambda, 0.0, 1.0);
  d.params = params;
  d.region = label.kind;
  const int pure_index = perm[0];
  d.pure_part = icd_basis(params.theta)[static_cast<std::size_t>(pure_index)];

  std::array<double, 4> qprime{};
  if (d.lambda > 1e-12) {
    qprime[0] = (q.p[0] + d.lambda - 1.0) / d.lambda;
    for (int i = 1; i < 4; ++i)
      qprime[static_cast<std::size_t>(i)] = q.p[static_cast<std::size_t>(i)] / d.lambda;
    for (double& x : qprime) x = std::max(x, 0.0);
  } else {
    // Pure entangled vertex: the separable part carries no weight and its
    // coordinates are a convention.
    qprime = {0.25, 0.25, 0.25, 0.25};
  }
  std::array<double, 4> pprime{};
  for (int i = 0; i < 4; ++i)
    pprime[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = qprime[static_cast<std::size_t>(i)];
  d.sep_params = make_icd_params(pprime, params.theta);

  if (d.lambda > 1e-12) {
    const SubnormalizedSet zs = boundary_product_vectors(d.sep_params);
    for (const Vec4& z : zs.vectors) {
      const double n2 = std::real(inner(z, z));
      d.bsa.weights.push_back(d.lambda * n2);
      d.bsa.states.push_back(n2 > 1e-14 ? PureState{(1.0 / std::sqrt(n2)) * z}
                                        : icd_basis(params.theta)[1]);
    }
  }
  return d;
}

/// (1 - lambda) sin(2 theta): the pure part's concurrence weighted by its
/// probability. Equals the state's concurrence (the decomposition saturates
/// the Wootters minimum).
inline double average_concurrence(const LSDecomposition& d) {
  return (1.0 - d.lambda) * d.params.sin2theta();
}

/// Recompute the BSA product ensemble of a decomposition.
inline WeightedEnsemble bsa_ensemble(const LSDecomposition& d, double boundary_tol = 1e-9) {
  const SubnormalizedSet zs = boundary_product_vectors(d.sep_params, boundary_tol);
  WeightedEnsemble e;
  for (const Vec4& z : zs.vectors) {
    const double n2 = std::real(inner(z, z));
    e.weights.push_back(d.lambda * n2);
    e.states.push_back(n2 > 1e-14 ? PureState{(1.0 / std::sqrt(n2)) * z}
                                  : icd_basis(d.params.theta)[1]);
  }
  return e;
}

namespace detail {

/// Least-squares expansion of target on up to two basis vectors; returns the
/// coefficients and the out-of-span residual norm.
inline std::pair<std::array<cplx, 2>, double> expand_in_pair(const Vec4& target,
                                                             const Vec4& b1,
                                                             const Vec4& b2) {
  const cplx g11 = inner(b1, b1), g12 = inner(b1, b2), g22 = inner(b2, b2);
  const cplx r1 = inner(b1, target), r2 = inner(b2, target);
  const cplx det = g11 * g22 - g12 * std::conj(g12);
  std::array<cplx, 2> c{};
  if (std::abs(det) < 1e-30) {
    c[0] = (std::abs(g11) > 1e-30) ? r1 / g11 : cplx{};
    c[1] = 0.0;
  } else {
    c[0] = (g22 * r1 - g12 * r2) / det;
    c[1] = (g11 * r2 - std::conj(g12) * r1) / det;
  }
  const Vec4 fit = c[0] * b1 + c[1] * b2;
  return {c, max_abs_diff(fit, target)};
}

/// LS pair condition (d): both weights reproduced by the D-denominator
/// formulas built from the 2x2 coefficient-matrix inverse.
inline CheckResult pair_condition_coupled(double lam_a, double lam_b, double pure_weight,
                                          const std::array<cplx, 2>& c) {
  detail::KMat amat;
  amat.n = 2;
  amat(0, 0) = lam_a + pure_weight * c[0] * std::conj(c[0]);
  amat(0, 1) = pure_weight * c[0] * std::conj(c[1]);
  amat(1, 0) = pure_weight * c[1] * std::conj(c[0]);
  amat(1, 1) = lam_b + pure_weight * c[1] * std::conj(c[1]);
  detail::KMat g;
  double det_mag = 0.0;
  CheckResult out;
  if (!detail::invert(amat, g, det_mag) || det_mag < 1e-30) {
    out.residual = 1.0;
    return out;
  }
  const double gaa = std::real(g(0, 0));
  const double gbb = std::real(g(1, 1));
  const double gab = std::abs(g(0, 1));
  const double dd = gaa * gbb - gab * gab;
  if (std::abs(dd) < 1e-30) {
    out.residual = 1.0;
    return out;
  }
  const double pred_a = (gbb - gab) / dd;
  const double pred_b = (gaa - gab) / dd;
  const double scale = std::max({lam_a, lam_b, 1e-12});
  out.residual = std::max(std::abs(pred_a - lam_a), std::abs(pred_b - lam_b)) / scale;
  return out;
}

}  // namespace detail

/// Product basis of the rank-2 slice p2 = p3 = 0: the separable part is an
/// equal mixture of two explicit product states.
inline std::array<PureState, 2> rank2_product_basis(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  const double r = 1.0 / std::sqrt(2.0);
  Vec<2> e1, e2, f1, f2;
  e1[0] = r;
  e1[1] = cplx(0.0, r);
  e2[0] = r;
  e2[1] = cplx(0.0, -r);
  f1[0] = c;
  f1[1] = cplx(0.0, -s);
  f2[0] = c;
  f2[1] = cplx(0.0, s);
  return {PureState{tensor(e1, f1)}, PureState{tensor(e2, f2)}};
}

/// Check the full set of L-S optimality conditions on a decomposition:
/// reconstruction, PSD + boundary placement of the separable part, single
/// maximality of every ensemble weight, and pairwise maximality through the
/// appropriate full-rank / rank-deficient / rank-2 route. Failures are
/// reported in the verdict, never thrown.
inline OptimalityVerdict verify_optimality(const LSDecomposition& d,
                                           double single_tol = 1e-8,
                                           double pair_tol = 1e-8) {
  OptimalityVerdict v;
  const double lambda = d.lambda;
  const double pure_weight = 1.0 - lambda;
  const Vec4& psi = d.pure_part.amplitudes;

  // Reconstruction and separable-part sanity.
  const DensityMatrix rho = icd_density(d.params);
  const DensityMatrix rho_s = icd_density(d.sep_params);
  Mat4 recon = pure_weight * projector(psi);
  for (std::size_t a = 0; a < d.bsa.weights.size(); ++a)
    recon = recon + d.bsa.weights[a] * projector(d.bsa.states[a].amplitudes);
  if (d.bsa.weights.empty()) recon = recon + lambda * rho_s.matrix;
  v.reconstruction.residual = max_abs_diff(recon, rho.matrix);
  v.reconstruction.pass = v.reconstruction.residual <= 1e-9;

  {
    const double pt_min = ppt_min_eigenvalue(rho_s);
    const ICDLambdas lam = lambda_spectrum_icd(d.sep_params);
    const double boundary =
        (lambda > 1e-12)
            ? std::abs(lam.sorted[0] - lam.sorted[1] - lam.sorted[2] - lam.sorted[3])
            : 0.0;
    v.separable_part.residual = std::max(std::max(-pt_min, 0.0), boundary);
    v.separable_part.pass = pt_min >= -1e-9 && boundary <= 1e-8;
  }

  // Branch selection from the region-1-frame coordinates of p'.
  const std::array<int, 4> perm = region_permutation(d.region);
  const ICDParams qprime = permute_params(d.sep_params, perm);
  const double zero_tol = 1e-9;
  if (qprime.p[1] < zero_tol && qprime.p[2] < zero_tol)
    v.branch = LSBranch::Rank2;
  else if (qprime.p[1] < zero_tol)
    v.branch = LSBranch::P2Zero;
  else if (qprime.p[2] < zero_tol)
    v.branch = LSBranch::P3Zero;
  else if (qprime.p[3] < zero_tol)
    v.branch = LSBranch::P4Zero;
  else
    v.branch = LSBranch::FullRank;

  if (lambda <= 1e-12 || d.bsa.weights.empty()) {
    // Pure vertex: nothing to maximize; conditions hold vacuously.
    for (auto& c : v.single_maximality) c.pass = true;
    for (auto& c : v.pair_maximality) c.pass = true;
    v.overall = v.reconstruction.pass && v.separable_part.pass;
    return v;
  }

  // Single maximality: <z|rho_a^-1|z> = Lambda_a^-1 on the 2-dim range.
  for (int a = 0; a < 4; ++a) {
    CheckResult& chk = v.single_maximality[static_cast<std::size_t>(a)];
    const double lam_a = d.bsa.weights[static_cast<std::size_t>(a)];
    if (lam_a < 1e-12) {
      chk.pass = true;  // zero-weight member: nothing to maximize
      continue;
    }
    const Vec4& zhat = d.bsa.states[static_cast<std::size_t>(a)].amplitudes;
    const Mat4 rho_a = lam_a * projector(zhat) + pure_weight * projector(psi);
    try {
      const Mat4 inv = restricted_inverse(rho_a, {zhat, psi});
      const cplx q = inner(zhat, mul(inv, zhat));
      chk.residual = std::abs(q * lam_a - cplx(1.0));
      chk.pass = chk.residual <= single_tol;
    } catch (const std::runtime_error&) {
      chk.residual = 1.0;
      chk.pass = false;
    }
  }

  // Pairwise maximality.
  int pair_index = 0;
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b, ++pair_index) {
      CheckResult& chk = v.pair_maximality[static_cast<std::size_t>(pair_index)];
      const double lam_a = d.bsa.weights[static_cast<std::size_t>(a)];
      const double lam_b = d.bsa.weights[static_cast<std::size_t>(b)];
      if (lam_a < 1e-12 || lam_b < 1e-12) {
        chk.pass = true;
        continue;
      }
      const Vec4& za = d.bsa.states[static_cast<std::size_t>(a)].amplitudes;
      const Vec4& zb = d.bsa.states[static_cast<std::size_t>(b)].amplitudes;

      const detail::KMat g = detail::gram({za, zb, psi});
      Mat4 gpad;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) gpad(i, j) = g(i, j);
      gpad(3, 3) = 1.0;  // padding eigenvalue, ignored below
      const std::array<double, 4> gev = hermitian_eigenvalues(gpad);
      const double sigma_min = gev[3];

      if (sigma_min > 1e-8) {
        // Independent triple: LS case (c). Expand rho_ab on its range and
        // confirm the decoupled inverse matrix elements.
        const Mat4 rho_ab = lam_a * projector(za) + lam_b * projector(zb) +
                            pure_weight * projector(psi);
        try {
          const Mat4 inv = restricted_inverse(rho_ab, {za, zb, psi});
          const double raa = std::abs(inner(za, mul(inv, za)) * lam_a - cplx(1.0));
          const double rbb = std::abs(inner(zb, mul(inv, zb)) * lam_b - cplx(1.0));
          const double rab =
              std::abs(inner(za, mul(inv, zb))) * std::sqrt(lam_a * lam_b);
          chk.residual = std::max({raa, rbb, rab});
          chk.pass = chk.residual <= pair_tol;
        } catch (const std::runtime_error&) {
          chk.residual = 1.0;
          chk.pass = false;
        }
      } else if (std::abs(inner(za, zb)) > 1.0 - 1e-9) {
        // Coincident pair (rank-2 slice): the two members are the same
        // projector, so the pair condition reduces to single maximality of
        // the combined weight against the pure part.
        const double lam_ab = lam_a + lam_b;
        const Mat4 rho_ab = lam_ab * projector(za) + pure_weight * projector(psi);
        try {
          const Mat4 inv = restricted_inverse(rho_ab, {za, psi});
          chk.residual = std::abs(inner(za, mul(inv, za)) * lam_ab - cplx(1.0));
          chk.pass = chk.residual <= pair_tol;
        } catch (const std::runtime_error&) {
          chk.residual = 1.0;
          chk.pass = false;
        }
      } else {
        // Degenerate triple: the pure part lies in the span of the pair.
        // LS case (d) with the coupled D-denominator formulas.
        const auto [c, span_residual] = detail::expand_in_pair(psi, za, zb);
        if (span_residual > 1e-6) {
          chk.residual = span_residual;
          chk.pass = false;
        } else {
          chk = detail::pair_condition_coupled(lam_a, lam_b, pure_weight, c);
          chk.pass = chk.residual <= pair_tol;
        }
      }
    }
  }

  // Closed-form Gamma cross-checks on the degenerate branches: the 2x2
  // restricted inverse of Lambda_a P_a + Lambda_b P_b + (1-lambda) P_psi has
  // explicit matrix elements on the pairs whose span contains the pure part.
  // A lambda-sorted check of unit product vectors u with predictions
  //   <u_a| inv |u_a> = (Lambda_b k + (1-lambda)) / Gamma,
  //   |<u_a| inv |u_b>| = (1-lambda) / Gamma,
  //   Gamma = Lambda_a Lambda_b k + (1-lambda)(Lambda_a + Lambda_b).
  bool gamma_ok = true;
  const auto gamma_pair_check = [&](const Vec4& ua, const Vec4& ub, double lam_a,
                                    double lam_b, double coef) {
    const auto [dcoef, span_residual] = detail::expand_in_pair(psi, ua, ub);
    (void)dcoef;
    if (span_residual > 1e-6) return false;
    const Mat4 rho_ab =
        lam_a * projector(ua) + lam_b * projector(ub) + pure_weight * projector(psi);
    Mat4 inv;
    try {
      inv = restricted_inverse(rho_ab, {ua, ub});
    } catch (const std::runtime_error&) {
      return false;
    }
    const double gamma = lam_a * lam_b * coef + pure_weight * (lam_a + lam_b);
    const double pred_aa = (lam_b * coef + pure_weight) / gamma;
    const double pred_bb = (lam_a * coef + pure_weight) / gamma;
    const double pred_ab = pure_weight / gamma;
    const double scale = std::max(pred_aa, 1.0);
    const double res =
        std::max({std::abs(std::real(inner(ua, mul(inv, ua))) - pred_aa),
                  std::abs(std::real(inner(ub, mul(inv, ub))) - pred_bb),
                  std::abs(std::abs(inner(ua, mul(inv, ub))) - pred_ab)}) /
        scale;
    return res <= 1e-7;
  };
  if (v.branch == LSBranch::P2Zero) {
    // In the lambda-sorted z ordering the zero mode sits in the last slot, so
    // the pairs spanning the pure part are (0,3) and (1,2). Unit vectors carry
    // an extra 1/|z|^2 = 4 relative to the subnormalized-z coefficient.
    const SubnormalizedSet zs = boundary_product_vectors(d.sep_params);
    const std::array<double, 4> al = icd_alphas(qprime);
    const double p1p = qprime.p[0];
    const std::array<std::pair<int, int>, 2> pairs{{{0, 3}, {1, 2}}};
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto& [a, b] = pairs[k];
      const Vec4& za = zs.vectors[static_cast<std::size_t>(a)];
      const Vec4& zb = zs.vectors[static_cast<std::size_t>(b)];
      const double na2 = std::real(inner(za, za));
      const double nb2 = std::real(inner(zb, zb));
      if (na2 < 1e-12 || nb2 < 1e-12) continue;
      const double sgn = (k == 0) ? 1.0 : -1.0;
      const double coef = 4.0 * (al[0] + sgn * al[1]) * (al[0] + sgn * al[1]) * p1p;
      if (!gamma_pair_check((1.0 / std::sqrt(na2)) * za, (1.0 / std::sqrt(nb2)) * zb,
                            lambda * na2, lambda * nb2, coef))
        gamma_ok = false;
    }
  } else if (v.branch == LSBranch::Rank2) {
    // Rank-2 slice: the separable part is an equal mixture of two orthogonal
    // product states; check in the region-1 frame where they are explicit.
    const std::array<PureState, 2> basis2 = rank2_product_basis(d.params.theta);
    const Vec4 psi_r1 = icd_basis(d.params.theta)[0].amplitudes;
    const auto [dcoef, span_residual] =
        detail::expand_in_pair(psi_r1, basis2[0].amplitudes, basis2[1].amplitudes);
    (void)dcoef;
    const double half = 0.5 * lambda;
    const Mat4 rho_ab = half * projector(basis2[0].amplitudes) +
                        half * projector(basis2[1].amplitudes) +
                        pure_weight * projector(psi_r1);
    if (span_residual > 1e-6) {
      gamma_ok = false;
    } else {
      try {
        const Mat4 inv =
            restricted_inverse(rho_ab, {basis2[0].amplitudes, basis2[1].amplitudes});
        const double gamma = 2.0 * half * half + pure_weight * lambda;
        const double pred_aa = (2.0 * half + pure_weight) / gamma;
        const double pred_ab = pure_weight / gamma;
        const double scale = std::max(pred_aa, 1.0);
        const double res = std::max(
            {std::abs(std::real(inner(basis2[0].amplitudes,
                                      mul(inv, basis2[0].amplitudes))) -
                      pred_aa),
             std::abs(std::real(inner(basis2[1].amplitudes,
                                      mul(inv, basis2[1].amplitudes))) -
                      pred_aa),
             std::abs(std::abs(inner(basis2[0].amplitudes,
                                     mul(inv, basis2[1].amplitudes))) -
                      pred_ab)}) /
            scale;
        if (res > 1e-7) gamma_ok = false;
      } catch (const std::runtime_error&) {
        gamma_ok = false;
      }
    }
  }

  v.overall = v.reconstruction.pass && v.separable_part.pass && gamma_ok;
  for (const CheckResult& c : v.single_maximality) v.overall = v.overall && c.pass;
  for (const CheckResult& c : v.pair_maximality) v.overall = v.overall && c.pass;
  return v;
}

}  // namespace icdlab
