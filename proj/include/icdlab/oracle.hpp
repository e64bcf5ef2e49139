#pragma once

// Independent numerical ground truth: randomized best-separable-approximation
// search, sampled minimum average concurrence over random decompositions, and
// seeded random state generators. Nothing here consults the closed forms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "icdlab/concurrence.hpp"
#include "icdlab/icd.hpp"
#include "icdlab/linalg.hpp"
#include "icdlab/qstate.hpp"
#include "icdlab/types.hpp"

namespace icdlab {

/// Seedable, splittable generator. Streams are derived through splitmix64 so
/// that child seeds decorrelate even for adjacent parent seeds.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

  static constexpr const char* algorithm() { return "mt19937_64+splitmix64"; }

  std::uint64_t seed() const { return seed_; }

  double uniform() { return unit_(engine_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit_(engine_); }
  double gaussian() { return normal_(engine_); }
  cplx gaussian_cplx() { return cplx(normal_(engine_), normal_(engine_)); }

  Rng split(std::uint64_t stream) const { return Rng(mix(seed_ + 0x9e3779b97f4a7c15ull * (stream + 1))); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

struct OracleReport {
  double numeric_lambda = 0.0;
  PureState best_pure_part;
  long sample_count = 0;
  double min_avg_concurrence = 0.0;
  double pt_min_eig = 0.0;
  std::uint64_t seed = 0;
  std::string rng_algorithm = Rng::algorithm();
};

/// p uniform on the 3-simplex (normalized exponentials), theta uniform on
/// [0.05, pi/2 - 0.05].
inline ICDParams random_icd(Rng& rng) {
  std::array<double, 4> p{};
  double total = 0.0;
  for (double& x : p) {
    x = -std::log(std::max(rng.uniform(), 1e-300));
    total += x;
  }
  for (double& x : p) x /= total;
  const double half_pi = 2.0 * std::asin(std::sqrt(0.5));
  return make_icd_params(p, rng.uniform(0.05, half_pi - 0.05));
}

inline ICDParams random_icd(std::uint64_t seed) {
  Rng rng(seed);
  return random_icd(rng);
}

/// Hilbert-Schmidt-measure random state: G G^dag / tr(G G^dag) with
/// complex-Gaussian G.
inline DensityMatrix random_density(Rng& rng) {
  Mat4 g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = rng.gaussian_cplx();
  Mat4 m = mul(g, adjoint(g));
  const double tr = std::real(trace(m));
  m = (1.0 / tr) * m;
  for (int i = 0; i < 4; ++i)  // exact hermitization against roundoff
    for (int j = i + 1; j < 4; ++j) {
      const cplx avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m(i, j) = avg;
      m(j, i) = std::conj(avg);
    }
  return make_density(m, 1e-9);
}

inline DensityMatrix random_density(std::uint64_t seed) {
  Rng rng(seed);
  return random_density(rng);
}

inline PureState random_pure(Rng& rng) {
  Vec4 v;
  for (int i = 0; i < 4; ++i) v[i] = rng.gaussian_cplx();
  return normalized(v);
}

namespace detail {

/// Feasibility of weight lambda for candidate |psi>: rho - (1-lambda)P must
/// be PSD and PPT (scaling by 1/lambda does not change either property).
/// Both minimum eigenvalues are concave in lambda, so the feasible set is an
/// interval, generally interior to [0, 1].
inline bool bsa_feasible(const Mat4& rho, const Mat4& proj, double lambda) {
  const Mat4 sigma = rho - (1.0 - lambda) * proj;
  if (min_eigenvalue(sigma) < -1e-12) return false;
  return min_eigenvalue(partial_transpose(sigma, 2)) >= -1e-12;
}

/// Candidate scorer working in the pure-part weight mu = 1 - lambda.
/// The PSD constraint rho - mu P >= 0 has the closed form
/// mu <= 1/<psi|rho^-1|psi> (pseudo-inverse on the range); only the PT
/// constraint needs bisection, and its feasible mu-set is an interval whose
/// lower end is the score. Precomputes the spectral data of rho once.
struct BsaScorer {
  Mat4 rho;
  Mat4 pt_rho;
  Mat4 pinv;        // pseudo-inverse of rho
  Mat4 range_proj;  // projector on the range of rho
  bool full_rank = true;

  explicit BsaScorer(const DensityMatrix& dm) : rho(dm.matrix) {
    pt_rho = partial_transpose(rho, 2);
    const HermitianEig<4> eig = hermitian_eig(rho, 1e-9);
    for (int k = 0; k < 4; ++k) {
      const double p = eig.values[static_cast<std::size_t>(k)];
      Vec4 v;
      for (int i = 0; i < 4; ++i) v[i] = eig.vectors(i, k);
      if (p > 1e-12) {
        pinv = pinv + (1.0 / p) * projector(v);
        range_proj = range_proj + projector(v);
      } else {
        full_rank = false;
      }
    }
  }

  bool pt_feasible(const Mat4& pt_proj, double mu) const {
    return min_eigenvalue(pt_rho - mu * pt_proj) >= -1e-12;
  }

  /// Largest lambda = 1 - mu beating `mu_cap` (the incumbent's mu), or a
  /// negative value when the candidate cannot beat it. Assumes rho is NPT,
  /// so mu = 0 is PT-infeasible and bisection brackets cleanly.
  double score(const Vec4& psi, double mu_cap, long& evals) const {
    ++evals;
    if (!full_rank) {
      const Vec4 out_of_range = psi - mul(range_proj, psi);
      if (norm(out_of_range) > 1e-9) return -1.0;
    }
    const double q = std::real(inner(psi, mul(pinv, psi)));
    const double mu_psd = (q > 1e-12) ? 1.0 / q : 1.0;
    const double cap = std::min(mu_psd, mu_cap);
    if (cap <= 0.0) return -1.0;

    const Mat4 pt_proj = partial_transpose(projector(psi), 2);
    double hi = -1.0;
    for (int k = 0; k < 6; ++k) {  // probe just under the cap first
      const double mu = cap * (1.0 - 1e-9) * (6 - k) / 6.0;
      ++evals;
      if (pt_feasible(pt_proj, mu)) {
        hi = mu;
        break;
      }
    }
    if (hi < 0.0) {
      // The PT minimum eigenvalue is concave in mu, and on boundary slices
      // its feasible set can degenerate to a single tangency point the fixed
      // probes miss. Ternary-search the maximizer and test feasibility there.
      double tlo = 0.0, thi = cap * (1.0 - 1e-9);
      for (int it = 0; it < 90 && thi - tlo > 1e-14; ++it) {
        const double m1 = tlo + (thi - tlo) / 3.0;
        const double m2 = thi - (thi - tlo) / 3.0;
        evals += 2;
        const double g1 = min_eigenvalue(pt_rho - m1 * pt_proj);
        const double g2 = min_eigenvalue(pt_rho - m2 * pt_proj);
        if (g1 < g2)
          tlo = m1;
        else
          thi = m2;
      }
      const double peak = 0.5 * (tlo + thi);
      ++evals;
      // Slightly looser acceptance: at an exact tangency the peak value is
      // limited by the localization width times the kink slope.
      if (min_eigenvalue(pt_rho - peak * pt_proj) < -5e-12) return -1.0;
      hi = peak;
    }
    double lo = 0.0;
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      ++evals;
      if (pt_feasible(pt_proj, mid))
        hi = mid;
      else
        lo = mid;
    }
    return 1.0 - hi;
  }
};

/// Pure state (U1 (x) U2)(cos b |00> + sin b |11>): concurrence sin(2b) for
/// any local unitaries. Each factor uses 3 parameters (mixing angle and two
/// phases); params = {a1, ph1a, ph1b, a2, ph2a, ph2b}.
inline Vec4 iso_concurrence_state(double b, const std::array<double, 6>& t) {
  const auto factor_cols = [](double a, double pa, double pb) {
    std::array<Vec<2>, 2> cols;
    const double ca = std::cos(a), sa = std::sin(a);
    const cplx ea(std::cos(pa), std::sin(pa)), eb(std::cos(pb), std::sin(pb));
    cols[0][0] = ca * ea;
    cols[0][1] = -sa * std::conj(eb);
    cols[1][0] = sa * eb;
    cols[1][1] = ca * std::conj(ea);
    return cols;
  };
  const auto u1 = factor_cols(t[0], t[1], t[2]);
  const auto u2 = factor_cols(t[3], t[4], t[5]);
  return std::cos(b) * tensor(u1[0], u2[0]) + std::sin(b) * tensor(u1[1], u2[1]);
}

}  // namespace detail

/// Randomized best-separable-approximation search: `budget` candidate pure
/// states (random draws plus pattern-search refinement around the incumbent),
/// each scored by bisection on the maximal feasible separable weight. The
/// result is a guaranteed lower bound on the true optimal lambda.
///
/// With `pure_concurrence_cap` in (0, 1] the candidate set is restricted to
/// pure parts of exactly that concurrence, searched over the 6-parameter
/// local-unitary manifold around cos(b)|00> + sin(b)|11>, sin(2b) = cap.
/// C(rho) <= (1 - lambda) C(psi) forces lambda <= 1 - C(rho)/C(psi), so the
/// capped optimum is attained on that manifold; the unconstrained optimum can
/// exceed it (up to 1 - C(rho), with a maximally entangled pure part).
inline OracleReport bsa_numeric(const DensityMatrix& rho, long budget, std::uint64_t seed,
                                double pure_concurrence_cap = -1.0) {
  if (budget < 1) budget = 1;
  OracleReport rep;
  rep.seed = seed;
  rep.pt_min_eig = ppt_min_eigenvalue(rho);
  rep.sample_count = budget;

  const HermitianEig<4> eig = hermitian_eig(rho.matrix, 1e-9);
  Vec4 lead;
  for (int i = 0; i < 4; ++i) lead[i] = eig.vectors(i, 0);
  rep.best_pure_part = PureState{lead};

  if (rep.pt_min_eig >= -1e-12) {  // PPT, hence separable: rho is its own BSA
    rep.numeric_lambda = 1.0;
    return rep;
  }
  const double purity = std::real(trace(mul(rho.matrix, rho.matrix)));
  if (purity > 1.0 - 1e-12) {  // pure entangled: empty separable part
    rep.numeric_lambda = 0.0;
    return rep;
  }

  Rng rng(seed);
  const detail::BsaScorer scorer(rho);
  double best = 0.0;       // best lambda so far
  double mu_best = 1.0;    // 1 - best
  Vec4 best_psi = lead;
  long evals = 0;

  // Budget counts feasibility evaluations, split between random exploration
  // and pattern-search refinement of the incumbent.
  const long explore = std::max<long>(budget / 2, 8);
  const bool capped = pure_concurrence_cap > 0.0;
  const double b_angle =
      capped ? 0.5 * std::asin(std::min(pure_concurrence_cap, 1.0)) : 0.0;

  if (capped) {
    // Manifold search: candidates are (U1 (x) U2)(cos b|00> + sin b|11>).
    const double two_pi = 8.0 * std::atan(1.0);
    const double half_pi = 0.25 * two_pi;
    // Structured trials first: axis-aligned local frames (mixing angles in
    // {0, pi/2}, phases in {0, pi/2, pi, 3pi/2}). These include the four
    // block-basis states of concurrence sin(2b), whose feasibility region
    // is thin and easily missed by uniform sampling.
    std::vector<std::array<double, 6>> structured;
    structured.push_back({0.0, 0.0, 0.0, 0.0, 0.0, 0.0});
    structured.push_back({half_pi, 0.0, 0.0, half_pi, 0.0, 2.0 * half_pi});
    structured.push_back({0.0, 0.0, 0.0, half_pi, 0.0, half_pi});
    structured.push_back({half_pi, 0.0, 0.0, 0.0, 0.0, 0.0});
    for (int a1 = 0; a1 < 2; ++a1)
      for (int a2 = 0; a2 < 2; ++a2)
        for (int f1 = 0; f1 < 4; ++f1)
          for (int f2 = 0; f2 < 4; ++f2)
            structured.push_back({a1 * half_pi, 0.0, f1 * half_pi,
                                  a2 * half_pi, 0.0, f2 * half_pi});
    std::array<double, 6> best_t{};
    long trial = 0;
    while (evals < explore) {
      std::array<double, 6> t{};
      if (trial < static_cast<long>(structured.size()))
        t = structured[static_cast<std::size_t>(trial)];
      else
        for (double& x : t) x = rng.uniform(0.0, two_pi);
      ++trial;
      const Vec4 psi = detail::iso_concurrence_state(b_angle, t);
      const double lam = scorer.score(psi, mu_best, evals);
      if (lam > best) {
        best = lam;
        mu_best = 1.0 - lam;
        best_t = t;
        best_psi = psi;
      }
    }
    double step = 0.2;
    while (evals < budget && step > 1e-10) {
      bool improved = false;
      for (int coord = 0; coord < 6 && evals < budget; ++coord) {
        for (int sgn = -1; sgn <= 1 && evals < budget; sgn += 2) {
          std::array<double, 6> t = best_t;
          t[static_cast<std::size_t>(coord)] += sgn * step;
          const Vec4 cand = detail::iso_concurrence_state(b_angle, t);
          const double lam = scorer.score(cand, mu_best, evals);
          if (lam > best + 1e-15) {
            best = lam;
            mu_best = 1.0 - lam;
            best_t = t;
            best_psi = cand;
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    rep.numeric_lambda = std::clamp(best, 0.0, 1.0);
    rep.best_pure_part = normalized(best_psi);
    rep.sample_count = evals;
    return rep;
  }

  long trial = 0;
  while (evals < explore) {
    Vec4 psi = lead;
    if (trial++ > 0) {
      psi = mul(scorer.range_proj, random_pure(rng).amplitudes);
      const double nrm = norm(psi);
      if (nrm < 1e-6) continue;
      psi = (1.0 / nrm) * psi;
    }
    const double lam = scorer.score(psi, mu_best, evals);
    if (lam > best) {
      best = lam;
      mu_best = 1.0 - lam;
      best_psi = psi;
    }
  }

  // Coordinate pattern search over the 8 real components, shrinking step.
  double step = 0.2;
  while (evals < budget && step > 1e-10) {
    bool improved = false;
    for (int coord = 0; coord < 8 && evals < budget; ++coord) {
      for (int sgn = -1; sgn <= 1 && evals < budget; sgn += 2) {
        Vec4 cand = best_psi;
        const int idx = coord / 2;
        cand[idx] += (coord % 2 == 0) ? cplx(sgn * step, 0.0) : cplx(0.0, sgn * step);
        if (!scorer.full_rank) cand = mul(scorer.range_proj, cand);
        const double nrm = norm(cand);
        if (nrm < 1e-12) continue;
        cand = (1.0 / nrm) * cand;
        const double lam = scorer.score(cand, mu_best, evals);
        if (lam > best + 1e-15) {
          best = lam;
          mu_best = 1.0 - lam;
          best_psi = cand;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }

  rep.numeric_lambda = std::clamp(best, 0.0, 1.0);
  rep.best_pure_part = normalized(best_psi);
  rep.sample_count = evals;
  return rep;
}

/// Smallest average concurrence over sampled pure-state decompositions of
/// rho. Trial 0 injects the analytic minimizing ensemble, so the result
/// achieves the Wootters concurrence up to roundoff; random trials mix the
/// spectral ensemble through Gaussian isometries of sizes 4..8.
inline double min_avg_concurrence_sample(const DensityMatrix& rho, long trials,
                                         std::uint64_t seed) {
  if (trials < 1) trials = 1;
  const SubnormalizedSet spectral = subnormalized_eigenvectors(rho);
  const int r = static_cast<int>(spectral.vectors.size());

  double best = average_concurrence(wootters_optimal_vectors(rho));
  Rng rng(seed);
  for (long t = 1; t < trials; ++t) {
    const int m = 4 + static_cast<int>(rng.uniform() * 4.999);
    // Columns of an m x r isometry by Gram-Schmidt on Gaussian columns.
    std::vector<std::vector<cplx>> cols(static_cast<std::size_t>(r),
                                        std::vector<cplx>(static_cast<std::size_t>(m)));
    for (int j = 0; j < r; ++j) {
      auto& c = cols[static_cast<std::size_t>(j)];
      for (int a = 0; a < m; ++a) c[static_cast<std::size_t>(a)] = rng.gaussian_cplx();
      for (int k = 0; k < j; ++k) {
        const auto& w = cols[static_cast<std::size_t>(k)];
        cplx ov = 0.0;
        for (int a = 0; a < m; ++a) ov += std::conj(w[static_cast<std::size_t>(a)]) * c[static_cast<std::size_t>(a)];
        for (int a = 0; a < m; ++a) c[static_cast<std::size_t>(a)] -= ov * w[static_cast<std::size_t>(a)];
      }
      double n2 = 0.0;
      for (int a = 0; a < m; ++a) n2 += std::norm(c[static_cast<std::size_t>(a)]);
      const double n = std::sqrt(n2);
      if (n < 1e-12) {
        for (int a = 0; a < m; ++a) c[static_cast<std::size_t>(a)] = (a == j) ? 1.0 : 0.0;
      } else {
        for (int a = 0; a < m; ++a) c[static_cast<std::size_t>(a)] *= 1.0 / n;
      }
    }
    double avg = 0.0;
    for (int a = 0; a < m; ++a) {
      Vec4 y;
      for (int j = 0; j < r; ++j)
        y = y + cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(a)] *
                    spectral.vectors[static_cast<std::size_t>(j)];
      avg += tilde_overlap(y);
    }
    best = std::min(best, avg);
  }
  return best;
}

}  // namespace icdlab
