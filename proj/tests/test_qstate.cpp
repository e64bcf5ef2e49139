#include <doctest.h>

#include <cmath>

#include "icdlab/icd.hpp"
#include "icdlab/oracle.hpp"
#include "icdlab/qstate.hpp"

using namespace icdlab;

TEST_CASE("make_pure enforces normalization") {
  Vec4 v;
  v[0] = 1.0;
  CHECK_NOTHROW(make_pure(v));
  v[0] = 0.9;
  CHECK_THROWS_AS(make_pure(v), InvalidState);
  CHECK(std::abs(norm(normalized(v).amplitudes) - 1.0) < 1e-14);
}

TEST_CASE("make_density validates hermiticity, trace, and positivity") {
  Mat4 ok = Mat4::identity();
  ok = 0.25 * ok;
  CHECK_NOTHROW(make_density(ok));

  Mat4 bad_trace = Mat4::identity();
  CHECK_THROWS_AS(make_density(bad_trace), InvalidState);

  Mat4 bad_herm = ok;
  bad_herm(0, 1) = cplx(0.0, 0.1);
  CHECK_THROWS_AS(make_density(bad_herm), InvalidState);

  Mat4 indefinite{};
  indefinite(0, 0) = 1.2;
  indefinite(1, 1) = -0.2;
  CHECK_THROWS_AS(make_density(indefinite), InvalidState);
}

TEST_CASE("mix reproduces the weighted projector sum") {
  const std::array<PureState, 4> basis = icd_basis(0.6);
  WeightedEnsemble e;
  e.weights = {0.4, 0.3, 0.2, 0.1};
  for (const PureState& s : basis) e.states.push_back(s);
  const DensityMatrix rho = mix(e);
  Mat4 expect;
  for (int i = 0; i < 4; ++i)
    expect = expect + e.weights[static_cast<std::size_t>(i)] *
                          projector(basis[static_cast<std::size_t>(i)].amplitudes);
  CHECK(max_abs_diff(rho.matrix, expect) < 1e-12);

  e.weights[0] = 0.5;  // no longer sums to 1
  CHECK_THROWS_AS(mix(e), InvalidWeights);
}

TEST_CASE("spin flip is an involution on states") {
  Rng rng(7101);
  const DensityMatrix rho = random_density(rng);
  CHECK(max_abs_diff(spin_flip(spin_flip(rho.matrix)), rho.matrix) < 1e-14);
  const Vec4 v = random_pure(rng).amplitudes;
  CHECK(max_abs_diff(spin_flip(spin_flip(v)), v) < 1e-14);
}

TEST_CASE("Bell states are spin-flip invariant up to phase") {
  const std::array<PureState, 4> bell = icd_basis(std::atan(1.0));  // theta = pi/4
  for (const PureState& s : bell) {
    const Vec4 flipped = spin_flip(s.amplitudes);
    CHECK(std::abs(std::abs(inner(s.amplitudes, flipped)) - 1.0) < 1e-12);
  }
}

TEST_CASE("PPT classification: maximally mixed vs Bell projector") {
  Mat4 mixed = Mat4::identity();
  mixed = 0.25 * mixed;
  CHECK(is_ppt_separable(make_density(mixed)));

  const PureState bell = icd_basis(std::atan(1.0))[0];
  const DensityMatrix proj = make_density(projector(bell.amplitudes));
  CHECK_FALSE(is_ppt_separable(proj));
  CHECK(ppt_min_eigenvalue(proj) == doctest::Approx(-0.5).epsilon(1e-10));
}

TEST_CASE("Werner states cross the PPT boundary at p = 1/3") {
  const PureState bell = icd_basis(std::atan(1.0))[0];
  auto werner = [&](double p) {
    Mat4 m = p * projector(bell.amplitudes);
    Mat4 id = Mat4::identity();
    m = m + ((1.0 - p) / 4.0) * id;
    return make_density(m);
  };
  CHECK(is_ppt_separable(werner(1.0 / 3.0 - 1e-6)));
  CHECK_FALSE(is_ppt_separable(werner(1.0 / 3.0 + 1e-6)));
  // at the crossing the PT minimum eigenvalue vanishes
  CHECK(std::abs(ppt_min_eigenvalue(werner(1.0 / 3.0))) < 1e-12);
}
