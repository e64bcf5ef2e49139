#pragma once

// The iso-concurrence decomposable (ICD) family: the theta-dependent basis,
// densities over the probability simplex, separability-region classification,
// closed-form concurrence and lambda spectrum, and the explicit block unitary
// that diagonalizes the family's tau matrix.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "icdlab/concurrence.hpp"
#include "icdlab/errors.hpp"
#include "icdlab/qstate.hpp"
#include "icdlab/takagi.hpp"
#include "icdlab/types.hpp"

namespace icdlab {

struct ICDParams {
  std::array<double, 4> p{};
  double theta = 0.0;

  double sin2theta() const { return std::sin(2.0 * theta); }
  double cos2theta() const { return std::cos(2.0 * theta); }
};

enum class Region { Separable, Entangled1, Entangled2, Entangled3, Entangled4 };

struct RegionLabel {
  Region kind = Region::Separable;
  double slack = 0.0;  // signed margin of inequality 1; positive = violated
};

inline std::string to_string(Region r) {
  switch (r) {
    case Region::Separable: return "Separable";
    case Region::Entangled1: return "Entangled1";
    case Region::Entangled2: return "Entangled2";
    case Region::Entangled3: return "Entangled3";
    case Region::Entangled4: return "Entangled4";
  }
  return "?";
}

/// Validates and (for tiny deviations) renormalizes the simplex coordinates.
inline ICDParams make_icd_params(const std::array<double, 4>& p, double theta) {
  if (!(theta > 0.0 && theta < std::asin(1.0)))  // (0, pi/2)
    throw ThetaOutOfRange("theta must lie in the open interval (0, pi/2)");
  double total = 0.0;
  for (double pi : p) {
    if (pi < -1e-12 || pi > 1.0 + 1e-9) throw InvalidParams("p_i outside [0,1]");
    total += pi;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidParams("probabilities do not sum to 1");
  ICDParams out;
  for (int i = 0; i < 4; ++i) out.p[static_cast<std::size_t>(i)] =
      std::max(p[static_cast<std::size_t>(i)], 0.0) / total;
  out.theta = theta;
  return out;
}

/// The four iso-concurrence basis states; Bell states at theta = pi/4.
/// Pairwise orthonormal, each of concurrence sin(2 theta).
inline std::array<PureState, 4> icd_basis(double theta) {
  if (!(theta > 0.0 && theta < std::asin(1.0)))
    throw ThetaOutOfRange("theta must lie in the open interval (0, pi/2)");
  const double c = std::cos(theta), s = std::sin(theta);
  std::array<PureState, 4> b;
  b[0].amplitudes[0] = c;
  b[0].amplitudes[3] = s;
  b[1].amplitudes[0] = s;
  b[1].amplitudes[3] = -c;
  b[2].amplitudes[1] = c;
  b[2].amplitudes[2] = s;
  b[3].amplitudes[1] = s;
  b[3].amplitudes[2] = -c;
  return b;
}

/// sum_i p_i |psi_i><psi_i|; block diagonal in {|00>,|11>} and {|01>,|10>}.
inline DensityMatrix icd_density(const ICDParams& params) {
  const std::array<PureState, 4> b = icd_basis(params.theta);
  Mat4 m;
  for (int i = 0; i < 4; ++i)
    m = m + params.p[static_cast<std::size_t>(i)] * projector(b[static_cast<std::size_t>(i)].amplitudes);
  return make_density(m, 1e-9);
}

enum class InequalityForm { Corrected, Literal };

/// Signed violations t_1..t_4 of the four separability inequalities.
/// The corrected form carries the sin(2 theta) factor on the left side,
/// which is what agrees with the partial-transpose spectrum; the literal
/// printed form is kept for comparison only.
inline std::array<double, 4> separability_slacks(const ICDParams& params,
                                                 InequalityForm form = InequalityForm::Corrected) {
  const double s = params.sin2theta();
  const double f = (form == InequalityForm::Corrected) ? s : 1.0;
  const auto& p = params.p;
  const double r34 = std::sqrt(4.0 * p[2] * p[3] + (p[2] - p[3]) * (p[2] - p[3]) * s * s);
  const double r12 = std::sqrt(4.0 * p[0] * p[1] + (p[0] - p[1]) * (p[0] - p[1]) * s * s);
  return {(p[0] - p[1]) * f - r34, (p[1] - p[0]) * f - r34,
          (p[2] - p[3]) * f - r12, (p[3] - p[2]) * f - r12};
}

/// Separable iff all four corrected inequalities hold; otherwise the unique
/// violated inequality names the entangled region.
inline RegionLabel classify_region(const ICDParams& params,
                                   InequalityForm form = InequalityForm::Corrected) {
  const std::array<double, 4> t = separability_slacks(params, form);
  RegionLabel label;
  label.slack = t[0];
  int best = -1;
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    if (t[static_cast<std::size_t>(i)] > worst) {
      worst = t[static_cast<std::size_t>(i)];
      best = i;
    }
  }
  switch (best) {
    case 0: label.kind = Region::Entangled1; break;
    case 1: label.kind = Region::Entangled2; break;
    case 2: label.kind = Region::Entangled3; break;
    case 3: label.kind = Region::Entangled4; break;
    default: label.kind = Region::Separable; break;
  }
  return label;
}

/// Index permutation that maps a region-k point into region-1 position.
/// Each permutation is an involution, so it is its own inverse.
inline std::array<int, 4> region_permutation(Region r) {
  switch (r) {
    case Region::Entangled2: return {1, 0, 2, 3};
    case Region::Entangled3: return {2, 3, 0, 1};
    case Region::Entangled4: return {3, 2, 1, 0};
    default: return {0, 1, 2, 3};
  }
}

inline ICDParams permute_params(const ICDParams& params, const std::array<int, 4>& perm) {
  ICDParams out = params;
  for (int i = 0; i < 4; ++i)
    out.p[static_cast<std::size_t>(i)] = params.p[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
  return out;
}

namespace detail {

inline double region1_concurrence(const std::array<double, 4>& p, double s) {
  return (p[0] - p[1]) * s -
         std::sqrt(4.0 * p[2] * p[3] + (p[2] - p[3]) * (p[2] - p[3]) * s * s);
}

}  // namespace detail

/// Closed-form concurrence: the region-1 formula applied after mapping the
/// point into region-1 position.
inline double concurrence_icd(const ICDParams& params) {
  const RegionLabel label = classify_region(params);
  const ICDParams q = permute_params(params, region_permutation(label.kind));
  return std::max(0.0, detail::region1_concurrence(q.p, q.sin2theta()));
}

struct ICDLambdas {
  std::array<double, 4> paper{};   // the closed-form labeling (two 2x2 blocks)
  std::array<double, 4> sorted{};  // descending view
};

/// Closed-form singular values of the family's tau matrix.
inline ICDLambdas lambda_spectrum_icd(const ICDParams& params) {
  const double s = params.sin2theta();
  const auto& p = params.p;
  const double d12 = std::sqrt(4.0 * p[0] * p[1] + (p[0] - p[1]) * (p[0] - p[1]) * s * s);
  const double d34 = std::sqrt(4.0 * p[2] * p[3] + (p[2] - p[3]) * (p[2] - p[3]) * s * s);
  ICDLambdas out;
  out.paper = {0.5 * ((p[0] - p[1]) * s + d12), 0.5 * ((p[1] - p[0]) * s + d12),
               0.5 * ((p[2] - p[3]) * s + d34), 0.5 * ((p[3] - p[2]) * s + d34)};
  out.sorted = out.paper;
  std::sort(out.sorted.begin(), out.sorted.end(), std::greater<>());
  return out;
}

namespace detail {

/// Normalized eigenvector components of one 2x2 tau block. The printed
/// denominators lack a square root; with it, a1^2 + a2^2 = 1 exactly.
inline std::pair<double, double> block_alphas(double p1, double p2, double s, double c) {
  const double d = std::sqrt(4.0 * p1 * p2 + (p1 - p2) * (p1 - p2) * s * s);
  const double bracket =
      4.0 * p1 * p2 * c * c + (p1 + p2) * (p1 + p2) * s * s + (p1 + p2) * s * d;
  if (bracket < 1e-300) return {1.0, 0.0};
  const double a1 = ((p1 + p2) * s + d) / (std::sqrt(2.0) * std::sqrt(bracket));
  const double a2 = std::sqrt(2.0 * p1 * p2) * c / std::sqrt(bracket);
  return {a1, a2};
}

}  // namespace detail

/// alpha_1..alpha_4 of the block unitary, corrected normalization.
inline std::array<double, 4> icd_alphas(const ICDParams& params) {
  const double s = params.sin2theta(), c = params.cos2theta();
  const auto [a1, a2] = detail::block_alphas(params.p[0], params.p[1], s, c);
  const auto [a3, a4] = detail::block_alphas(params.p[2], params.p[3], s, c);
  return {a1, a2, a3, a4};
}

/// The explicit block unitary with U tau U^T = diag(lambda), rows reordered
/// so the spectrum is descending.
inline TakagiResult unitary_U_icd(const ICDParams& params) {
  const std::array<double, 4> al = icd_alphas(params);
  const cplx i1(0.0, 1.0);
  Mat4 u;
  u(0, 0) = i1 * al[0];
  u(0, 1) = -i1 * al[1];
  u(1, 0) = al[1];
  u(1, 1) = al[0];
  u(2, 2) = al[2];
  u(2, 3) = -al[3];
  u(3, 2) = i1 * al[3];
  u(3, 3) = i1 * al[2];

  const ICDLambdas lam = lambda_spectrum_icd(params);
  std::array<int, 4> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return lam.paper[static_cast<std::size_t>(a)] > lam.paper[static_cast<std::size_t>(b)];
  });
  TakagiResult out;
  for (int r = 0; r < 4; ++r) {
    out.lambdas[static_cast<std::size_t>(r)] = lam.paper[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])];
    for (int j = 0; j < 4; ++j) out.u(r, j) = u(order[static_cast<std::size_t>(r)], j);
  }
  return out;
}

}  // namespace icdlab
