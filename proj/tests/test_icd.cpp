#include <doctest.h>

#include <cmath>

#include "icdlab/concurrence.hpp"
#include "icdlab/icd.hpp"
#include "icdlab/oracle.hpp"
#include "icdlab/takagi.hpp"

using namespace icdlab;

namespace {
const double kPi = 4.0 * std::atan(1.0);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(make_icd_params({0.25, 0.25, 0.25, 0.25}, 0.0), ThetaOutOfRange);
  CHECK_THROWS_AS(make_icd_params({0.25, 0.25, 0.25, 0.25}, kPi / 2.0), ThetaOutOfRange);
  CHECK_THROWS_AS(make_icd_params({0.5, 0.5, 0.5, 0.5}, 0.5), InvalidParams);
  CHECK_THROWS_AS(make_icd_params({1.5, -0.5, 0.0, 0.0}, 0.5), InvalidParams);
  const ICDParams p = make_icd_params({0.7, 0.1, 0.1, 0.1}, kPi / 6.0);
  CHECK(p.p[0] == doctest::Approx(0.7));
  CHECK(p.sin2theta() == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("basis states are orthonormal with concurrence sin(2 theta)") {
  for (double theta : {0.2, kPi / 6.0, kPi / 4.0, 1.3}) {
    const std::array<PureState, 4> b = icd_basis(theta);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        const cplx want = (i == j) ? cplx(1.0) : cplx{};
        CHECK(std::abs(inner(b[static_cast<std::size_t>(i)].amplitudes,
                             b[static_cast<std::size_t>(j)].amplitudes) -
                       want) < 1e-12);
      }
      CHECK(tilde_overlap(b[static_cast<std::size_t>(i)].amplitudes) ==
            doctest::Approx(std::sin(2.0 * theta)).epsilon(1e-12));
    }
  }
}

TEST_CASE("family density is block diagonal in {00,11} and {01,10}") {
  const ICDParams params = make_icd_params({0.4, 0.3, 0.2, 0.1}, 0.7);
  const DensityMatrix rho = icd_density(params);
  for (int i : {0, 3})
    for (int j : {1, 2}) {
      CHECK(std::abs(rho.matrix(i, j)) < 1e-14);
      CHECK(std::abs(rho.matrix(j, i)) < 1e-14);
    }
  CHECK(std::abs(trace(rho.matrix) - cplx(1.0)) < 1e-12);
}

TEST_CASE("classification agrees with the PPT oracle on random points") {
  Rng rng(7301);
  int entangled = 0;
  for (int t = 0; t < 2000; ++t) {
    const ICDParams params = random_icd(rng);
    const double pt = ppt_min_eigenvalue(icd_density(params));
    if (std::abs(pt) < 1e-10) continue;  // boundary band
    const bool sep = classify_region(params).kind == Region::Separable;
    CHECK(sep == (pt > 0.0));
    if (!sep) ++entangled;
  }
  CHECK(entangled > 0);
}

TEST_CASE("the literal inequality form disagrees with PPT away from theta = pi/4") {
  // At theta = pi/4 both forms coincide; for small theta the literal form
  // (no sin factor on the left side) overcounts entangled points.
  const ICDParams params = make_icd_params({0.45, 0.25, 0.299, 0.001}, 0.15);
  CHECK(classify_region(params, InequalityForm::Literal).kind != Region::Separable);
  CHECK(classify_region(params, InequalityForm::Corrected).kind == Region::Separable);
  CHECK(ppt_min_eigenvalue(icd_density(params)) > 0.0);
}

TEST_CASE("each entangled region is reachable and maps into region 1") {
  Rng rng(7302);
  std::array<int, 5> hits{};
  for (int t = 0; t < 4000; ++t) {
    const ICDParams params = random_icd(rng);
    const RegionLabel label = classify_region(params);
    hits[static_cast<std::size_t>(label.kind)]++;
    if (label.kind == Region::Separable) continue;
    const std::array<int, 4> perm = region_permutation(label.kind);
    const ICDParams q = permute_params(params, perm);
    CHECK(classify_region(q).kind == Region::Entangled1);
    // involution
    const ICDParams back = permute_params(q, perm);
    for (int i = 0; i < 4; ++i)
      CHECK(back.p[static_cast<std::size_t>(i)] == params.p[static_cast<std::size_t>(i)]);
  }
  for (int h : hits) CHECK(h > 0);
}

TEST_CASE("closed-form concurrence matches the general Wootters route") {
  Rng rng(7303);
  for (int t = 0; t < 1000; ++t) {
    const ICDParams params = random_icd(rng);
    const double closed = concurrence_icd(params);
    const double general = concurrence_general(icd_density(params)).concurrence;
    CHECK(closed == doctest::Approx(general).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("region-1 concurrence equals the violated inequality's slack") {
  Rng rng(7304);
  int seen = 0;
  for (int t = 0; t < 4000 && seen < 300; ++t) {
    const ICDParams params = random_icd(rng);
    const RegionLabel label = classify_region(params);
    if (label.kind != Region::Entangled1) continue;
    ++seen;
    CHECK(concurrence_icd(params) == doctest::Approx(label.slack).epsilon(1e-10).scale(1.0));
  }
  CHECK(seen == 300);
}

TEST_CASE("concurrence = -2 pt_min exactly when (p3-p4) cos(2 theta) = 0") {
  // On the Bell-diagonal slice and the p3 = p4 slice the partial-transpose
  // block aligns with the inequality and the PT identity is exact; a generic
  // region-1 point breaks it at order 1e-3.
  Rng rng(7307);
  int seen = 0;
  while (seen < 100) {
    ICDParams draw = random_icd(rng);
    std::array<double, 4> p = draw.p;
    const bool bell = (seen % 2 == 0);
    if (!bell) p[3] = p[2];
    double tot = 0.0;
    for (double x : p) tot += x;
    for (double& x : p) x /= tot;
    const ICDParams q = make_icd_params(p, bell ? kPi / 4.0 : draw.theta);
    if (classify_region(q).kind != Region::Entangled1) continue;
    ++seen;
    const double pt = ppt_min_eigenvalue(icd_density(q));
    CHECK(concurrence_icd(q) == doctest::Approx(-2.0 * pt).epsilon(1e-9).scale(1.0));
  }

  const ICDParams cx = make_icd_params({0.6099, 0.3286, 0.0139, 0.0476}, 0.3620);
  REQUIRE(classify_region(cx).kind == Region::Entangled1);
  const double dev =
      std::abs(concurrence_icd(cx) + 2.0 * ppt_min_eigenvalue(icd_density(cx)));
  CHECK(dev > 1e-6);  // the PT identity is slice-specific, not generic
}

TEST_CASE("closed-form lambda spectrum matches the numerical Takagi route") {
  Rng rng(7305);
  for (int t = 0; t < 300; ++t) {
    const ICDParams params = random_icd(rng);
    const ICDLambdas lam = lambda_spectrum_icd(params);
    const DensityMatrix rho = icd_density(params);
    const SubnormalizedSet set = subnormalized_eigenvectors(rho);
    const TakagiResult tk = takagi(tau_matrix(set));
    for (int i = 0; i < 4; ++i)
      CHECK(lam.sorted[static_cast<std::size_t>(i)] ==
            doctest::Approx(tk.lambdas[static_cast<std::size_t>(i)]).epsilon(1e-10).scale(1.0));
    double total = 0.0;
    for (double l : lam.paper) total += l;
    CHECK(total <= 1.0 + 1e-12);  // sum lambda_i <= 1 on the simplex
  }
}

TEST_CASE("the block unitary diagonalizes the family tau matrix") {
  Rng rng(7306);
  for (int t = 0; t < 300; ++t) {
    const ICDParams params = random_icd(rng);
    const std::array<double, 4> al = icd_alphas(params);
    CHECK(al[0] * al[0] + al[1] * al[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(al[2] * al[2] + al[3] * al[3] == doctest::Approx(1.0).epsilon(1e-12));

    const TakagiResult tk = unitary_U_icd(params);
    CHECK(max_abs_diff(mul(tk.u, adjoint(tk.u)), Mat4::identity()) < 1e-12);

    const std::array<PureState, 4> basis = icd_basis(params.theta);
    SubnormalizedSet vset;
    for (int i = 0; i < 4; ++i)
      vset.vectors.push_back(std::sqrt(params.p[static_cast<std::size_t>(i)]) *
                             basis[static_cast<std::size_t>(i)].amplitudes);
    const Mat4 tau = tau_matrix(vset);
    const Mat4 d = mul(mul(tk.u, tau), transpose(tk.u));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const cplx want = (i == j) ? cplx(tk.lambdas[static_cast<std::size_t>(i)], 0.0) : cplx{};
        CHECK(std::abs(d(i, j) - want) < 1e-10);
      }
  }
}

TEST_CASE("golden fixture: p=(0.7,0.1,0.1,0.1), theta=pi/6") {
  const ICDParams params = make_icd_params({0.7, 0.1, 0.1, 0.1}, kPi / 6.0);
  CHECK(classify_region(params).kind == Region::Entangled1);
  CHECK(concurrence_icd(params) == doctest::Approx(0.3196152).epsilon(1e-6));
  const ICDLambdas lam = lambda_spectrum_icd(params);
  CHECK(lam.sorted[0] == doctest::Approx(0.6306175).epsilon(1e-6));
  CHECK(lam.sorted[1] == doctest::Approx(0.1110023).epsilon(1e-6));
  CHECK(lam.sorted[2] == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(lam.sorted[3] == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(ppt_min_eigenvalue(icd_density(params)) == doctest::Approx(-0.1598076).epsilon(1e-6));
}
