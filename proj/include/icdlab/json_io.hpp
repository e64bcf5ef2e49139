#pragma once

// JSON serialization for the library types. Field names here are part of the
// CLI contract: density matrices as row-major [re, im] pair lists under
// "matrix", states under "amplitudes", family parameters as {"p", "theta"},
// decompositions as {"lambda", "sep_params", "pure_part", "bsa", ...}.

#include <string>

#include <json.hpp>

#include "icdlab/icd.hpp"
#include "icdlab/lsd.hpp"
#include "icdlab/oracle.hpp"
#include "icdlab/qstate.hpp"
#include "icdlab/types.hpp"

namespace icdlab {

using json = nlohmann::json;

inline json to_json(const Vec4& v) {
  json arr = json::array();
  for (int i = 0; i < 4; ++i) arr.push_back({std::real(v[i]), std::imag(v[i])});
  return arr;
}

inline Vec4 vec4_from_json(const json& arr) {
  if (!arr.is_array() || arr.size() != 4) throw InvalidState("amplitudes: expected 4 [re, im] pairs");
  Vec4 v;
  for (int i = 0; i < 4; ++i) {
    const json& e = arr[static_cast<std::size_t>(i)];
    if (!e.is_array() || e.size() != 2) throw InvalidState("amplitudes: entry is not an [re, im] pair");
    v[i] = cplx(e[0].get<double>(), e[1].get<double>());
  }
  return v;
}

inline json to_json(const PureState& s) { return json{{"amplitudes", to_json(s.amplitudes)}}; }

inline PureState pure_from_json(const json& j) {
  return make_pure(vec4_from_json(j.at("amplitudes")), 1e-8);
}

inline json to_json(const DensityMatrix& rho) {
  json entries = json::array();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      entries.push_back({std::real(rho.matrix(i, j)), std::imag(rho.matrix(i, j))});
  return json{{"matrix", entries}};
}

inline DensityMatrix density_from_json(const json& j) {
  const json& entries = j.at("matrix");
  if (!entries.is_array() || entries.size() != 16)
    throw InvalidState("matrix: expected 16 row-major [re, im] pairs");
  Mat4 m;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      const json& e = entries[static_cast<std::size_t>(4 * i + k)];
      if (!e.is_array() || e.size() != 2) throw InvalidState("matrix: entry is not an [re, im] pair");
      m(i, k) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  return make_density(m, 1e-8);
}

inline json to_json(const ICDParams& p) {
  return json{{"p", {p.p[0], p.p[1], p.p[2], p.p[3]}}, {"theta", p.theta}};
}

inline ICDParams icd_params_from_json(const json& j) {
  const json& p = j.at("p");
  if (!p.is_array() || p.size() != 4) throw InvalidParams("p: expected 4 probabilities");
  std::array<double, 4> arr{};
  for (int i = 0; i < 4; ++i) arr[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)].get<double>();
  return make_icd_params(arr, j.at("theta").get<double>());
}

inline json to_json(const WeightedEnsemble& e) {
  json weights = json::array();
  json states = json::array();
  for (std::size_t i = 0; i < e.weights.size(); ++i) {
    weights.push_back(e.weights[i]);
    states.push_back(to_json(e.states[i].amplitudes));
  }
  return json{{"weights", weights}, {"states", states}};
}

inline json to_json(const CheckResult& c) {
  return json{{"pass", c.pass}, {"residual", c.residual}};
}

inline json to_json(const OptimalityVerdict& v) {
  json singles = json::array();
  for (const CheckResult& c : v.single_maximality) singles.push_back(to_json(c));
  json pairs = json::array();
  for (const CheckResult& c : v.pair_maximality) pairs.push_back(to_json(c));
  return json{{"single_maximality", singles},
              {"pair_maximality", pairs},
              {"reconstruction", to_json(v.reconstruction)},
              {"separable_part", to_json(v.separable_part)},
              {"branch", to_string(v.branch)},
              {"overall", v.overall}};
}

inline json to_json(const LSDecomposition& d) {
  return json{{"lambda", d.lambda},
              {"params", to_json(d.params)},
              {"sep_params", to_json(d.sep_params)},
              {"pure_part", to_json(d.pure_part)},
              {"bsa", to_json(d.bsa)},
              {"region", to_string(d.region)}};
}

inline json to_json(const OracleReport& r) {
  return json{{"numeric_lambda", r.numeric_lambda},
              {"best_pure_part", to_json(r.best_pure_part)},
              {"sample_count", r.sample_count},
              {"min_avg_concurrence", r.min_avg_concurrence},
              {"pt_min_eig", r.pt_min_eig},
              {"seed", r.seed},
              {"rng_algorithm", r.rng_algorithm}};
}

}  // namespace icdlab
