// Command-line front end: analyze, verify-gamma, trace-loop, zn, config.
#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

#include "blaschke/analysis.hpp"
#include "blaschke/blaschke_product.hpp"
#include "blaschke/error.hpp"
#include "blaschke/tracking.hpp"
#include "blaschke/znmodel.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;
constexpr int kNumerical = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

blaschke::BlaschkeProduct load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open spec file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("spec is not valid JSON: " + std::string(e.what()));
  }
  return blaschke::BlaschkeProduct::from_json(j);
}

void emit(const nlohmann::json& j, const std::string& path) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  blaschke::Config cfg;
  CLI::App app{"Monodromy, commutant and bundle-shift checks for finite Blaschke products"};
  app.require_subcommand(1);

  std::string spec_path, report_path, out_path;
  long budget = 100'000;
  int samples = 100;
  int index = 0;
  int zn_order = 2;
  double isometry_bound = 1e-2;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "Seed for every random choice");
    sub->add_option("--newton-tol", cfg.newton_tol, "Residual |B(z) - w| accepted while tracking");
    sub->add_option("--dedup-tol", cfg.dedup_tol, "Branch value deduplication distance");
    sub->add_option("--group-cap", cfg.group_cap, "Largest group order enumerated");
  };

  auto* analyze = app.add_subcommand("analyze", "Monodromy representation and commutant of B");
  analyze->add_option("spec", spec_path, "Blaschke spec JSON")->required();
  analyze->add_option("--report", report_path, "Write the report here instead of stdout");
  add_common(analyze);

  auto* gamma = app.add_subcommand("verify-gamma", "Check the unitary Gamma numerically");
  gamma->add_option("spec", spec_path, "Blaschke spec JSON")->required();
  gamma->add_option("--budget", budget, "Stratified samples for the isometry estimate")->check(CLI::Range(10'000L, 100'000'000L));
  gamma->add_option("--samples", samples, "Sample points for intertwining/disjointness")->check(CLI::Range(10, 1'000'000));
  gamma->add_option("--isometry-bound", isometry_bound, "Largest accepted isometry error");
  gamma->add_option("--report", report_path, "Write the report here instead of stdout");
  add_common(gamma);

  auto* trace = app.add_subcommand("trace-loop", "CSV trace of the fiber along one monodromy loop");
  trace->add_option("spec", spec_path, "Blaschke spec JSON")->required();
  trace->add_option("--index", index, "Loop index, 0-based")->required();
  trace->add_option("--out", out_path, "CSV output path (stdout if omitted)");
  add_common(trace);

  auto* zn = app.add_subcommand("zn", "End-to-end check against the closed-form z^n model");
  zn->add_option("--n", zn_order, "Order n")->required();
  zn->add_option("--report", report_path, "Write the report here instead of stdout");
  add_common(zn);

  auto* config = app.add_subcommand("config", "Print the default tolerances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return e.get_exit_code() == 0 ? code : kUsage;
  }

  try {
    if (config->parsed()) {
      auto j = blaschke::config_to_json(cfg);
      j["seed"] = cfg.seed;
      emit(j, "");
      return kOk;
    }
    if (zn->parsed()) {
      if (zn_order < 1 || zn_order > 8) throw UsageError("--n must be in 1..8");
      auto rep = blaschke::zn_end_to_end(zn_order, cfg);
      emit(rep.json, report_path);
      return rep.pass ? kOk : kCheckFailed;
    }

    blaschke::BlaschkeProduct b = load_spec(spec_path);
    if (analyze->parsed()) {
      auto outcome = blaschke::analyze(b, cfg);
      emit(outcome.report, report_path);
      return outcome.checks_pass ? kOk : kCheckFailed;
    }
    if (gamma->parsed()) {
      blaschke::GammaOptions opts;
      opts.budget = budget;
      opts.samples = samples;
      opts.isometry_bound = isometry_bound;
      auto outcome = blaschke::verify_gamma(b, opts, cfg);
      emit(outcome.report, report_path);
      return outcome.pass ? kOk : kCheckFailed;
    }
    if (trace->parsed()) {
      auto bd = blaschke::branch_data(b, cfg);
      if (index < 0 || index >= static_cast<int>(bd.branch_values.size()))
        throw UsageError("--index " + std::to_string(index) + " out of range: B has " +
                         std::to_string(bd.branch_values.size()) + " branch values");
      blaschke::cplx w0 = blaschke::choose_base_point(bd.branch_values);
      auto fiber = blaschke::initial_fiber(b, w0, cfg);
      auto loops = blaschke::build_loops(bd.branch_values, w0);
      auto res = blaschke::track(b, fiber, loops.loops[static_cast<std::size_t>(index)], cfg, true);

      std::ostringstream csv;
      csv.precision(17);
      csv << "t,re_w,im_w";
      for (std::size_t i = 0; i < fiber.points.size(); ++i) csv << ",re_z" << i + 1 << ",im_z" << i + 1;
      csv << "\n";
      for (const auto& row : res.trace) {
        csv << row.t << "," << row.w.real() << "," << row.w.imag();
        for (auto z : row.z) csv << "," << z.real() << "," << z.imag();
        csv << "\n";
      }
      if (out_path.empty()) {
        std::cout << csv.str();
      } else {
        std::ofstream out(out_path);
        if (!out) throw UsageError("cannot write " + out_path);
        out << csv.str();
      }
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const blaschke::Error& e) {
    std::cerr << "error [" << e.diagnostic() << "]\n";
    return e.kind() == blaschke::ErrorKind::InvalidInput ? kUsage : kNumerical;
  }
  return kUsage;
}
