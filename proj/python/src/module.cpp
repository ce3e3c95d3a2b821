#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "blaschke/analysis.hpp"
#include "blaschke/blaschke_product.hpp"
#include "blaschke/bundle.hpp"
#include "blaschke/error.hpp"
#include "blaschke/monodromy.hpp"
#include "blaschke/znmodel.hpp"

namespace py = pybind11;
using namespace blaschke;

namespace {

BlaschkeProduct parse(const std::string& spec) { return BlaschkeProduct::from_json(nlohmann::json::parse(spec)); }

Config make_config(std::uint64_t seed, double newton_tol) {
  Config cfg;
  cfg.seed = seed;
  cfg.newton_tol = newton_tol;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Monodromy and commutant computations for finite Blaschke products";

  static py::exception<Error> exc(m, "BlaschkeError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      exc(e.diagnostic().c_str());
    }
  });

  m.def(
      "analyze",
      [](const std::string& spec, std::uint64_t seed, double newton_tol) {
        auto out = analyze(parse(spec), make_config(seed, newton_tol));
        return out.report.dump();
      },
      py::arg("spec"), py::arg("seed") = 0, py::arg("newton_tol") = 1e-11);

  m.def(
      "verify_gamma",
      [](const std::string& spec, long budget, int samples, double isometry_bound, std::uint64_t seed) {
        GammaOptions opts;
        opts.budget = budget;
        opts.samples = samples;
        opts.isometry_bound = isometry_bound;
        Config cfg;
        cfg.seed = seed;
        return verify_gamma(parse(spec), opts, cfg).report.dump();
      },
      py::arg("spec"), py::arg("budget") = 100000, py::arg("samples") = 100, py::arg("isometry_bound") = 1e-2,
      py::arg("seed") = 0);

  m.def(
      "zn", [](int n) { return zn_end_to_end(n).json.dump(); }, py::arg("n"));

  m.def(
      "u_i_norm_check",
      [](int n, int i, int k) {
        auto [a, b] = u_i_norm_check(n, i, k);
        return std::make_pair(std::make_pair(a.num, a.den), std::make_pair(b.num, b.den));
      },
      py::arg("n"), py::arg("i"), py::arg("k"));

  m.def(
      "evaluate", [](const std::string& spec, cplx z) { return parse(spec)(z); }, py::arg("spec"), py::arg("z"));

  m.def(
      "branch_values",
      [](const std::string& spec) { return branch_data(parse(spec)).branch_values; }, py::arg("spec"));

  m.def(
      "generators",
      [](const std::string& spec, std::uint64_t seed) {
        auto rep = compute_representation(parse(spec), make_config(seed, 1e-11));
        std::vector<std::vector<int>> out;
        for (const auto& g : rep.generators) out.push_back(g.images());
        return out;
      },
      py::arg("spec"), py::arg("seed") = 0);

  m.def(
      "orbital_count",
      [](const std::vector<std::vector<int>>& gens, int n) {
        std::vector<Permutation> perms;
        for (const auto& g : gens) perms.emplace_back(g);
        return orbital_count(perms, n);
      },
      py::arg("generators"), py::arg("n"));
}
