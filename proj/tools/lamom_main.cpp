#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lamom/cli_core.hpp"
#include "lamom/measurement.hpp"
#include "lamom/moments.hpp"

namespace {

using namespace lamom;
using nlohmann::json;

long dim_limit_from_env() {
  const char* env = std::getenv("LAMOM_DIM_LIMIT");
  if (env == nullptr) return kDefaultDimLimit;
  char* end = nullptr;
  const long value = std::strtol(env, &end, 10);
  if (end == env || value < 1) {
    throw Error(errc::param_out_of_range, "LAMOM_DIM_LIMIT must be a positive integer");
  }
  return value;
}

PositiveMapSpec resolve_map(const std::string& name_or_path, int dB) {
  if (auto builtin = builtin_map(name_or_path, dB)) return *builtin;
  PositiveMapSpec lam = map_from_file(name_or_path);
  if (lam.dim() != dB) {
    throw Error(errc::dimension_mismatch, "map dimension does not match subsystem B");
  }
  return lam;
}

cdouble trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.transpose().cwiseProduct(b)).sum();
}

int run_analyze(const std::string& state_path, const std::string& map_name) {
  DensityMatrix rho = from_file(state_path);
  PositiveMapSpec lam = resolve_map(map_name, rho.dims().dB);
  std::cout << reports_to_json_text(full_report(rho, lam)) << "\n";
  return 0;
}

int run_sweep(const std::string& family, double from, double to, int steps,
              const std::string& map_name, const std::string& out_path) {
  if (family != "horodecki") {
    throw Error(errc::param_out_of_range, "unknown family '" + family + "'");
  }
  PositiveMapSpec lam = resolve_map(map_name, 3);
  std::vector<SweepRow> rows = horodecki_sweep(from, to, steps, lam);
  if (out_path == "-") {
    write_sweep_csv(std::cout, rows);
  } else {
    std::ofstream out(out_path);
    if (!out) throw Error(errc::parse_error, "cannot write CSV file: " + out_path);
    write_sweep_csv(out, rows);
  }
  return 0;
}

int run_threshold(const std::string& criterion, const std::string& map_name, double tol,
                  bool as_json) {
  PositiveMapSpec lam = resolve_map(map_name, 3);
  const double a_star = find_threshold(criterion, lam, tol);
  if (as_json) {
    json j;
    j["criterion"] = criterion;
    j["a_star"] = round12(a_star);
    std::cout << j.dump() << "\n";
  } else {
    std::printf("%.6f\n", a_star);
  }
  return 0;
}

int run_verify_operators(int k, double a, long dim_limit) {
  if (k != 2 && k != 3) {
    throw Error(errc::param_out_of_range, "verify-operators supports k in {2, 3}");
  }
  DensityMatrix rho = horodecki_state(a);
  PositiveMapSpec lam = lambda1_map();

  MomentVector mv = moments_of(normalized_image(lam, rho));
  const double exact = mv.q[k];

  MeasurementOperator obs = build_observable(lam, rho.dims(), k, dim_limit);
  ComplexMatrix power = rho.mat();
  for (int t = 1; t < k; ++t) power = kron(power, rho.mat());
  const double expectation = trace_product(obs.op, power).real();
  const double diff = std::abs(expectation - exact);

  json j;
  j["k"] = k;
  j["a"] = round12(a);
  j["q_exact"] = round12(exact);
  j["expectation"] = round12(expectation);
  j["abs_diff"] = round12(diff);

  bool ok = diff <= 1e-9;
  if (k == 3) {
    // The explicit operator shifts copies opposite to cyclic_permutation_operator;
    // pair it with the A-side shift of its own orientation.
    ComplexMatrix vb_explicit = lambda1_vb3_explicit();
    ComplexMatrix va = dagger(cyclic_permutation_operator(rho.dims().dA, 3, dim_limit));
    MeasurementOperator obs_explicit = assemble_observable(va, vb_explicit, 2.0, rho.dims(), 3,
                                                           dim_limit);
    const double expectation2 = trace_product(obs_explicit.op, power).real();
    const double diff2 = std::abs(expectation2 - exact);
    const double entry_res = max_abs(vb_explicit - twisted_permutation(lam, 3, dim_limit));
    j["vb3_expectation"] = round12(expectation2);
    j["vb3_abs_diff"] = round12(diff2);
    j["vb3_entrywise_residual"] = round12(entry_res);
    ok = ok && diff2 <= 1e-9;
  }
  std::cout << j.dump() << "\n";
  return ok ? 0 : 3;
}

int run_simulate(int k, double a, long long shots, std::uint64_t seed, long dim_limit) {
  DensityMatrix rho = horodecki_state(a);
  PositiveMapSpec lam = lambda1_map();
  MeasurementOperator obs = build_observable(lam, rho.dims(), k, dim_limit);
  ShotEstimate est = born_sample(obs, rho, shots, seed);

  MomentVector mv = moments_of(normalized_image(lam, rho));
  const double exact = mv.q[k];
  const double z = est.std_err > 0.0 ? (est.mean - exact) / est.std_err : 0.0;

  json j;
  j["mean"] = round12(est.mean);
  j["stderr"] = round12(est.std_err);
  j["shots"] = est.shots;
  j["seed"] = est.seed;
  j["exact"] = round12(exact);
  j["z_score"] = round12(z);
  std::cout << j.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement detection from moments of positive-map images"};
  app.require_subcommand(1);

  std::string state_path, map_name = "lambda1", family = "horodecki", criterion, out_path;
  double from = 2.0, to = 5.0, tol = 1e-6, a = 3.5;
  int steps = 301, k = 2;
  long long shots = 100000;
  std::uint64_t seed = 1;
  bool as_json = false;

  CLI::App* analyze = app.add_subcommand("analyze", "Run all criteria on a state file");
  analyze->add_option("state", state_path, "state JSON file")->required();
  analyze->add_option("--map", map_name, "built-in map name or map JSON file");
  analyze->add_flag("--json", as_json, "JSON output (always on for this command)");

  CLI::App* sweep = app.add_subcommand("sweep", "Criterion margins over the Horodecki family");
  sweep->add_option("--family", family);
  sweep->add_option("--from", from);
  sweep->add_option("--to", to);
  sweep->add_option("--steps", steps);
  sweep->add_option("--map", map_name);
  sweep->add_option("--out", out_path, "output CSV path, '-' for stdout")->required();

  CLI::App* threshold = app.add_subcommand("threshold", "Detection threshold of one criterion");
  threshold->add_option("--criterion", criterion, "q3 | q3o | ppt3o")->required();
  threshold->add_option("--map", map_name);
  threshold->add_option("--tol", tol, "bisection width");
  threshold->add_flag("--json", as_json);

  CLI::App* verify = app.add_subcommand("verify-operators",
                                        "Cross-check multi-copy observables against moments");
  verify->add_option("--k", k)->required();
  verify->add_option("--a", a)->required();
  verify->add_flag("--json", as_json, "JSON output (always on for this command)");

  CLI::App* simulate = app.add_subcommand("simulate", "Shot-noise simulation of a moment");
  simulate->add_option("--k", k)->required();
  simulate->add_option("--a", a)->required();
  simulate->add_option("--shots", shots);
  simulate->add_option("--seed", seed);
  simulate->add_flag("--json", as_json, "JSON output (always on for this command)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const long dim_limit = dim_limit_from_env();
    if (analyze->parsed()) return run_analyze(state_path, map_name);
    if (sweep->parsed()) return run_sweep(family, from, to, steps, map_name, out_path);
    if (threshold->parsed()) {
      const std::string th_map = (criterion == "ppt3o") ? "transpose" : map_name;
      return run_threshold(criterion, th_map, tol, as_json);
    }
    if (verify->parsed()) return run_verify_operators(k, a, dim_limit);
    if (simulate->parsed()) return run_simulate(k, a, shots, seed, dim_limit);
  } catch (const lamom::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return lamom::is_input_error(e.code()) ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
