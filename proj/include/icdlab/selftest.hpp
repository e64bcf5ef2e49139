#pragma once

// Reduced-sample invariant battery behind the CLI `selftest` command. Each
// suite exercises one module's core identities on seeded random inputs and
// reports the worst residual seen.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "icdlab/concurrence.hpp"
#include "icdlab/icd.hpp"
#include "icdlab/linalg.hpp"
#include "icdlab/lsd.hpp"
#include "icdlab/oracle.hpp"
#include "icdlab/qstate.hpp"
#include "icdlab/takagi.hpp"
#include "icdlab/types.hpp"

namespace icdlab {

struct SuiteResult {
  std::string name;
  bool pass = false;
  double worst_residual = 0.0;
  std::string detail;
};

namespace detail {

inline Mat4 random_symmetric(Rng& rng) {
  Mat4 t;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      const cplx e = rng.gaussian_cplx();
      t(i, j) = e;
      t(j, i) = e;
    }
  return t;
}

}  // namespace detail

/// Eigendecomposition, PSD square root, partial transpose involution.
inline SuiteResult selftest_linalg(long samples, std::uint64_t seed) {
  SuiteResult r{"linalg", true, 0.0, ""};
  Rng rng = Rng(seed).split(1);
  for (long t = 0; t < samples; ++t) {
    const DensityMatrix rho = random_density(rng);
    const HermitianEig<4> eig = hermitian_eig(rho.matrix);
    Mat4 recon;
    for (int k = 0; k < 4; ++k) {
      Vec4 v;
      for (int i = 0; i < 4; ++i) v[i] = eig.vectors(i, k);
      recon = recon + eig.values[static_cast<std::size_t>(k)] * projector(v);
    }
    const Mat4 root = psd_sqrt(rho.matrix);
    double res = max_abs_diff(recon, rho.matrix);
    res = std::max(res, max_abs_diff(mul(root, root), rho.matrix));
    res = std::max(res, max_abs_diff(
                            partial_transpose(partial_transpose(rho.matrix, 2), 2),
                            rho.matrix));
    r.worst_residual = std::max(r.worst_residual, res);
  }
  r.pass = r.worst_residual <= 1e-9;
  return r;
}

/// Takagi factorization residuals on random complex-symmetric matrices.
inline SuiteResult selftest_takagi(long samples, std::uint64_t seed) {
  SuiteResult r{"takagi", true, 0.0, ""};
  Rng rng = Rng(seed).split(2);
  for (long t = 0; t < samples; ++t) {
    const Mat4 tau = detail::random_symmetric(rng);
    const TakagiResult tk = takagi(tau);
    const Mat4 d = mul(mul(tk.u, tau), transpose(tk.u));
    double res = max_abs_diff(mul(tk.u, adjoint(tk.u)), Mat4::identity());
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const cplx want = (i == j) ? cplx(tk.lambdas[static_cast<std::size_t>(i)], 0.0) : cplx{};
        res = std::max(res, std::abs(d(i, j) - want));
      }
    r.worst_residual = std::max(r.worst_residual, res);
  }
  r.pass = r.worst_residual <= 1e-9;
  return r;
}

/// Closed-form concurrence, lambda spectrum, and region classification
/// against the general Wootters route and the PPT oracle.
inline SuiteResult selftest_icd(long samples, std::uint64_t seed) {
  SuiteResult r{"icd", true, 0.0, ""};
  Rng rng = Rng(seed).split(3);
  for (long t = 0; t < samples; ++t) {
    const ICDParams params = random_icd(rng);
    const DensityMatrix rho = icd_density(params);
    const ConcurrenceReport rep = concurrence_general(rho);
    double res = std::abs(concurrence_icd(params) - rep.concurrence);
    const ICDLambdas lam = lambda_spectrum_icd(params);
    for (int i = 0; i < 4; ++i)
      res = std::max(res, std::abs(lam.sorted[static_cast<std::size_t>(i)] -
                                   rep.lambdas[static_cast<std::size_t>(i)]));
    const bool sep = classify_region(params).kind == Region::Separable;
    const double pt = ppt_min_eigenvalue(rho);
    if (sep != (pt >= -1e-10) && std::abs(pt) > 1e-10) {
      r.pass = false;
      r.detail = "classification disagrees with PPT sign";
    }
    r.worst_residual = std::max(r.worst_residual, res);
  }
  r.pass = r.pass && r.worst_residual <= 1e-9;
  return r;
}

/// L-S closed form: saturation, reconstruction, BSA product ensemble, and
/// the optimality verdict on entangled points.
inline SuiteResult selftest_lsd(long samples, std::uint64_t seed) {
  SuiteResult r{"lsd", true, 0.0, ""};
  Rng rng = Rng(seed).split(4);
  long done = 0;
  while (done < samples) {
    const ICDParams params = random_icd(rng);
    if (classify_region(params).kind == Region::Separable) continue;
    ++done;
    const LSDecomposition d = lsd_closed_form(params);
    double res = std::abs(average_concurrence(d) - concurrence_icd(params));
    const DensityMatrix rho = icd_density(params);
    Mat4 recon = (1.0 - d.lambda) * projector(d.pure_part.amplitudes) +
                 d.lambda * icd_density(d.sep_params).matrix;
    res = std::max(res, max_abs_diff(recon, rho.matrix));
    for (const PureState& z : d.bsa.states)
      res = std::max(res, tilde_overlap(z.amplitudes));
    const OptimalityVerdict v = verify_optimality(d);
    if (!v.overall) {
      r.pass = false;
      r.detail = "optimality verdict failed";
    }
    r.worst_residual = std::max(r.worst_residual, res);
  }
  r.pass = r.pass && r.worst_residual <= 1e-8;
  return r;
}

/// Oracle sanity: numeric lambda never beats the certified closed form, and
/// sampled average concurrence never beats the Wootters minimum.
inline SuiteResult selftest_oracle(long samples, std::uint64_t seed) {
  SuiteResult r{"oracle", true, 0.0, ""};
  Rng rng = Rng(seed).split(5);
  const long points = std::max<long>(2, samples / 50);
  for (long t = 0; t < points; ++t) {
    const ICDParams params = random_icd(rng);
    if (classify_region(params).kind == Region::Separable) continue;
    const DensityMatrix rho = icd_density(params);
    const LSDecomposition d = lsd_closed_form(params);
    const OracleReport rep = bsa_numeric(rho, 2000, rng.split(static_cast<std::uint64_t>(t)).seed(),
                                         params.sin2theta());
    const double over = rep.numeric_lambda - d.lambda;
    r.worst_residual = std::max(r.worst_residual, over);
    const double c = concurrence_general(rho).concurrence;
    const double sampled = min_avg_concurrence_sample(rho, 20, rng.split(1000 + static_cast<std::uint64_t>(t)).seed());
    r.worst_residual = std::max(r.worst_residual, c - sampled);
  }
  r.pass = r.worst_residual <= 1e-9;
  return r;
}

inline std::vector<SuiteResult> run_selftests(long samples, std::uint64_t seed) {
  return {selftest_linalg(samples, seed), selftest_takagi(samples, seed),
          selftest_icd(samples, seed), selftest_lsd(samples, seed),
          selftest_oracle(samples, seed)};
}

}  // namespace icdlab
