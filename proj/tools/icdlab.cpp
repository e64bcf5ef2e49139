// Command-line front end: single-point analysis, simplex sweeps, optimality
// verification against the numerical oracle, and the self-test battery.
// Exit codes: 0 success, 2 input error, 3 precondition violation,
// 4 verification failure.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "icdlab/concurrence.hpp"
#include "icdlab/icd.hpp"
#include "icdlab/json_io.hpp"
#include "icdlab/lsd.hpp"
#include "icdlab/oracle.hpp"
#include "icdlab/selftest.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitVerification = 4;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("ICDLAB_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      // fall through to the fixed default
    }
  }
  return 12345;
}

std::array<double, 4> parse_p(const std::string& text) {
  std::array<double, 4> p{};
  std::stringstream ss(text);
  std::string item;
  int n = 0;
  while (std::getline(ss, item, ',')) {
    if (n >= 4) throw std::invalid_argument("--p expects exactly 4 comma-separated values");
    std::size_t used = 0;
    p[static_cast<std::size_t>(n++)] = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("trailing characters in --p");
  }
  if (n != 4) throw std::invalid_argument("--p expects exactly 4 comma-separated values");
  return p;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

/// 9 significant digits, locale-independent.
std::string fmt9(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

std::ostream& open_out(std::optional<std::ofstream>& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.emplace(path);
  if (!file->is_open()) throw std::runtime_error("cannot open output file: " + path);
  return *file;
}

struct PointRow {
  icdlab::Region region;
  double concurrence;
  double eof;
  double pt_min_eig;
  double lambda;
};

PointRow evaluate_point(const icdlab::ICDParams& params) {
  PointRow row{};
  row.region = icdlab::classify_region(params).kind;
  row.concurrence = icdlab::concurrence_icd(params);
  row.eof = icdlab::eof_from_concurrence(row.concurrence);
  row.pt_min_eig = icdlab::ppt_min_eigenvalue(icdlab::icd_density(params));
  row.lambda = (row.region == icdlab::Region::Separable)
                   ? 1.0
                   : icdlab::lsd_closed_form(params).lambda;
  return row;
}

int run_analyze(const icdlab::ICDParams& params, bool with_verify, const std::string& format,
                const std::string& out_path) {
  const PointRow row = evaluate_point(params);
  std::optional<std::ofstream> file;
  std::ostream& os = open_out(file, out_path);

  if (format == "csv") {
    os << "p1,p2,p3,p4,theta,region,concurrence,eof,pt_min_eig,lambda\n"
       << fmt9(params.p[0]) << ',' << fmt9(params.p[1]) << ',' << fmt9(params.p[2]) << ','
       << fmt9(params.p[3]) << ',' << fmt9(params.theta) << ',' << to_string(row.region) << ','
       << fmt9(row.concurrence) << ',' << fmt9(row.eof) << ',' << fmt9(row.pt_min_eig) << ','
       << fmt9(row.lambda) << '\n';
    return kExitOk;
  }

  icdlab::json doc;
  doc["params"] = icdlab::to_json(params);
  doc["region"] = to_string(row.region);
  doc["concurrence"] = row.concurrence;
  doc["eof"] = row.eof;
  doc["pt_min_eig"] = row.pt_min_eig;
  doc["lambda"] = row.lambda;
  if (row.region != icdlab::Region::Separable) {
    const icdlab::LSDecomposition d = icdlab::lsd_closed_form(params);
    doc["sep_params"] = icdlab::to_json(d.sep_params);
    doc["pure_part"] = icdlab::to_json(d.pure_part);
    doc["bsa"] = icdlab::to_json(d.bsa);
    if (with_verify) doc["verdict"] = icdlab::to_json(icdlab::verify_optimality(d));
  } else if (with_verify) {
    doc["verdict"] = {{"overall", true}, {"note", "separable point; nothing to verify"}};
  }
  os << doc.dump(2) << '\n';
  return kExitOk;
}

int run_sweep(int resolution, const std::vector<double>& thetas, const std::string& out_path) {
  if (resolution < 1) throw icdlab::InvalidParams("--grid resolution must be >= 1");
  if (thetas.empty()) throw icdlab::InvalidParams("--theta-list must name at least one angle");
  std::optional<std::ofstream> file;
  std::ostream& os = open_out(file, out_path);
  os << "p1,p2,p3,p4,theta,region,concurrence,eof,pt_min_eig,lambda\n";
  const int n = resolution;
  for (const double theta : thetas) {
    for (int i = n; i >= 0; --i)
      for (int j = n - i; j >= 0; --j)
        for (int k = n - i - j; k >= 0; --k) {
          const int l = n - i - j - k;
          const std::array<double, 4> p{static_cast<double>(i) / n, static_cast<double>(j) / n,
                                        static_cast<double>(k) / n, static_cast<double>(l) / n};
          const icdlab::ICDParams params = icdlab::make_icd_params(p, theta);
          const PointRow row = evaluate_point(params);
          os << fmt9(p[0]) << ',' << fmt9(p[1]) << ',' << fmt9(p[2]) << ',' << fmt9(p[3]) << ','
             << fmt9(theta) << ',' << to_string(row.region) << ',' << fmt9(row.concurrence) << ','
             << fmt9(row.eof) << ',' << fmt9(row.pt_min_eig) << ',' << fmt9(row.lambda) << '\n';
        }
  }
  return kExitOk;
}

int run_verify(const icdlab::ICDParams& params, long budget, std::uint64_t seed,
               const std::string& fixture_path, const std::string& out_path) {
  if (icdlab::classify_region(params).kind == icdlab::Region::Separable) {
    std::cerr << "verify: point is separable; nothing to decompose\n";
    return kExitPrecondition;
  }
  const icdlab::LSDecomposition d = icdlab::lsd_closed_form(params);
  const icdlab::OptimalityVerdict verdict = icdlab::verify_optimality(d);
  icdlab::OracleReport oracle =
      icdlab::bsa_numeric(icdlab::icd_density(params), budget, seed, params.sin2theta());
  oracle.min_avg_concurrence =
      icdlab::min_avg_concurrence_sample(icdlab::icd_density(params), 200, seed + 1);
  const double gap = d.lambda - oracle.numeric_lambda;

  bool ok = verdict.overall && gap >= -1e-9;
  std::string failure;
  if (!verdict.overall) failure = "optimality verdict failed";
  if (gap < -1e-9) failure = "numeric oracle exceeds the closed-form weight";

  if (!fixture_path.empty()) {
    std::ifstream in(fixture_path);
    if (!in.is_open()) throw std::runtime_error("cannot open fixture: " + fixture_path);
    const icdlab::json fx = icdlab::json::parse(in);
    const double claimed = fx.at("lambda").get<double>();
    if (std::abs(claimed - d.lambda) > 1e-6) {
      ok = false;
      failure = "fixture lambda disagrees with the closed form";
    }
  }

  std::optional<std::ofstream> file;
  std::ostream& os = open_out(file, out_path);
  icdlab::json doc;
  doc["params"] = icdlab::to_json(params);
  doc["lambda"] = d.lambda;
  doc["verdict"] = icdlab::to_json(verdict);
  doc["oracle"] = icdlab::to_json(oracle);
  doc["gap"] = gap;
  doc["ok"] = ok;
  if (!failure.empty()) doc["failure"] = failure;
  os << doc.dump(2) << '\n';
  return ok ? kExitOk : kExitVerification;
}

int run_selftest(long samples, std::uint64_t seed) {
  const std::vector<icdlab::SuiteResult> results = icdlab::run_selftests(samples, seed);
  bool all = true;
  for (const icdlab::SuiteResult& r : results) {
    std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name
              << "  worst_residual=" << fmt9(r.worst_residual);
    if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
    std::cout << '\n';
    all = all && r.pass;
  }
  std::cout << (all ? "selftest: all suites passed\n" : "selftest: FAILURES\n");
  return all ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-qubit entanglement toolkit: concurrence, separability "
               "regions, and exact best-separable-approximation decompositions "
               "for the iso-concurrence family"};
  app.require_subcommand(1);

  std::string p_text, theta_list_text, format = "json", out_path, fixture_path;
  double theta = 0.0;
  bool theta_degrees = false, with_verify = false;
  int grid = 0;
  long budget = 100000, samples = 200;
  std::uint64_t seed = default_seed();

  auto add_point_flags = [&](CLI::App* cmd, bool required) {
    cmd->add_option("--p", p_text, "probabilities p1,p2,p3,p4")->required(required);
    cmd->add_option("--theta", theta, "family angle in radians")->required(required);
    cmd->add_flag("--theta-degrees", theta_degrees, "interpret --theta in degrees");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "analyze a single family point");
  add_point_flags(analyze, true);
  analyze->add_flag("--verify", with_verify, "attach the optimality verdict");
  analyze->add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  analyze->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* sweep = app.add_subcommand("sweep", "CSV sweep over a simplex grid x theta list");
  sweep->add_option("--grid", grid, "barycentric resolution per axis")->required();
  sweep->add_option("--theta-list", theta_list_text, "comma-separated angles in radians")
      ->required();
  sweep->add_flag("--theta-degrees", theta_degrees, "interpret --theta-list in degrees");
  sweep->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* verify = app.add_subcommand("verify", "verify a decomposition against the oracle");
  add_point_flags(verify, true);
  verify->add_option("--budget", budget, "oracle evaluation budget");
  verify->add_option("--seed", seed, "oracle seed");
  verify->add_option("--fixture", fixture_path, "JSON fixture with a claimed lambda to check");
  verify->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* selftest = app.add_subcommand("selftest", "run the invariant battery");
  selftest->add_option("--samples", samples, "samples per suite");
  selftest->add_option("--seed", seed, "battery seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    const double to_rad = theta_degrees ? std::asin(1.0) / 90.0 : 1.0;
    if (app.got_subcommand(analyze))
      return run_analyze(icdlab::make_icd_params(parse_p(p_text), theta * to_rad), with_verify,
                         format, out_path);
    if (app.got_subcommand(sweep)) {
      std::vector<double> thetas = parse_list(theta_list_text);
      for (double& t : thetas) t *= to_rad;
      return run_sweep(grid, thetas, out_path);
    }
    if (app.got_subcommand(verify))
      return run_verify(icdlab::make_icd_params(parse_p(p_text), theta * to_rad), budget, seed,
                        fixture_path, out_path);
    if (app.got_subcommand(selftest)) return run_selftest(samples, seed);
  } catch (const icdlab::ThetaOutOfRange& e) {
    std::cerr << "precondition: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const icdlab::InvalidParams& e) {
    std::cerr << "precondition: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const icdlab::InvalidState& e) {
    std::cerr << "precondition: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::out_of_range& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
