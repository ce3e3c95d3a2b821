// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "blaschke/analysis.hpp"
#include "blaschke/bundle.hpp"
#include "blaschke/commutant.hpp"
#include "blaschke/monodromy.hpp"
#include "blaschke/tracking.hpp"
#include "blaschke/znmodel.hpp"

using namespace blaschke;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

BlaschkeProduct random_product(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> r(0.0, 0.8), a(0.0, 2 * std::numbers::pi);
  std::vector<cplx> zeros;
  for (int i = 0; i < n; ++i) zeros.push_back(std::polar(r(rng), a(rng)));
  return BlaschkeProduct(a(rng), zeros);
}

// 14 generic products of orders 3..6 and 6 compositions, which have
// imprimitive monodromy and more than two orbitals.
std::vector<BlaschkeProduct> suite() {
  std::mt19937_64 rng(2024);
  std::vector<BlaschkeProduct> out;
  for (int i = 0; i < 14; ++i) out.push_back(random_product(rng, 3 + i % 4));
  const std::array<std::pair<int, int>, 6> shapes{{{2, 2}, {2, 3}, {3, 2}, {2, 2}, {3, 2}, {2, 3}}};
  for (auto [outer, inner] : shapes) {
    auto u = random_product(rng, outer), v = random_product(rng, inner);
    out.push_back(compose(u, v));
  }
  return out;
}

struct SuiteRun {
  int order = 0;
  int q = 0;
  int dim = 0;
  double max_commutator = 0.0;
  bool commutative = false;
};

std::vector<SuiteRun> run_suite(const std::vector<BlaschkeProduct>& products) {
  std::vector<SuiteRun> runs;
  for (const auto& b : products) {
    auto rep = compute_representation(b);
    const int n = rep.degree();
    auto cb = commutant_basis(rep.generators, n);
    auto [comm, norm] = is_commutative(cb, 1e-8);
    runs.push_back({n, orbital_count(rep.generators, n), cb.dim, norm, comm});
  }
  return runs;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome order_two() {
  std::mt19937_64 rng(7);
  int good = 0;
  for (int i = 0; i < 10; ++i) {
    auto out = analyze(random_product(rng, 2));
    const auto& r = out.report;
    bool transposition = r["generators"].size() == 1 && r["generators"][0] == nlohmann::json::parse("[1,0]");
    if (r["q_orbitals"] == 2 && r["commutant_dim"] == 2 && r["num_minimal_projections"] == 2 && transposition &&
        out.checks_pass)
      ++good;
  }
  return {good == 10, std::to_string(good) + "/10 order-2 products with q = dim = 2, 2 projections, a transposition"};
}

Outcome zn_family() {
  int good = 0;
  for (int n = 2; n <= 8; ++n) {
    auto rep = zn_end_to_end(n);
    if (rep.pass && rep.json["q_orbitals"] == n && rep.json["commutant_dim"] == n &&
        rep.json["num_minimal_projections"] == n)
      ++good;
  }
  return {good == 7, std::to_string(good) + "/7 of z^2..z^8 match the closed form"};
}

Outcome dimension_equals_orbitals(const std::vector<SuiteRun>& runs) {
  int good = 0;
  std::string dims;
  for (const auto& r : runs) {
    good += r.q == r.dim;
    dims += (dims.empty() ? "" : " ") + std::to_string(r.order) + ":" + std::to_string(r.q);
  }
  return {good == static_cast<int>(runs.size()),
          std::to_string(good) + "/" + std::to_string(runs.size()) + " with dim = q (order:q " + dims + ")"};
}

Outcome commutativity(const std::vector<SuiteRun>& runs) {
  double worst = 0.0;
  bool all = true;
  for (const auto& r : runs) {
    worst = std::max(worst, r.max_commutator);
    all = all && r.commutative && r.max_commutator < 1e-8;
  }
  return {all, "max commutator over the suite " + fmt(worst)};
}

Outcome gamma(const std::vector<BlaschkeProduct>& products) {
  const std::vector<Poly> polys{Poly::constant(1.0),
                                Poly::monomial(1),
                                Poly::monomial(2),
                                Poly({0.5, cplx(0, 1), -0.25, 0.0, 0.1}),
                                Poly({cplx(0.2, -0.1), 0.0, 0.0, 1.0}),
                                Poly({1.0, -1.0, 0.5, cplx(0, -0.3), 0.2, 0.05})};
  double worst_int = 0.0, worst_iso = 0.0, worst_mass = 0.0;
  const std::array<std::size_t, 5> picks{0, 3, 7, 14, 17};
  for (std::size_t idx : picks) {
    const auto& b = products[idx];
    auto inv = InverseBranches::standard(b);
    worst_int = std::max(worst_int, verify_intertwining(inv, polys, 100, idx));
    IsometryOptions o;
    o.budget = 1'000'000;
    o.seed = idx;
    o.exclusion_radius = 0.05;
    auto iso = isometry_gram(b, polys, o);
    worst_iso = std::max(worst_iso, iso.relative_error);
    worst_mass = std::max(worst_mass, iso.excluded_mass_bound);
  }
  return {worst_int < 1e-9 && worst_iso < 1e-2, "5 products: intertwining " + fmt(worst_int) + ", isometry error " +
                                                    fmt(worst_iso) + " at budget 1e6, excluded mass " +
                                                    fmt(worst_mass)};
}

Outcome separation(const std::vector<BlaschkeProduct>& products) {
  double min_sep = std::numeric_limits<double>::infinity();
  bool bijective = true;
  double slope_lo = 1e9, slope_hi = -1e9;
  int slopes = 0;
  const std::vector<double> radii{1e-2, 1e-3, 1e-4};
  for (std::size_t idx = 0; idx < products.size(); ++idx) {
    const auto& b = products[idx];
    auto inv = InverseBranches::standard(b);
    auto d = verify_disjoint_images(inv, 100, 1000 + idx);
    min_sep = std::min(min_sep, d.min_separation);
    bijective = bijective && d.bijective;

    // Simple branch values well away from the rest of S and from the circle.
    auto bd = branch_data(b);
    for (std::size_t j = 0; j < bd.branch_values.size(); ++j) {
      if (bd.critical_over[j].size() != 1) continue;
      if (bd.critical_points[static_cast<std::size_t>(bd.critical_over[j][0])].multiplicity != 1) continue;
      double iso = 1.0 - std::abs(bd.branch_values[j]);
      for (std::size_t k = 0; k < bd.branch_values.size(); ++k)
        if (k != j) iso = std::min(iso, std::abs(bd.branch_values[j] - bd.branch_values[k]));
      // Three times the largest probe radius keeps every probe circle in the
      // square-root regime.
      if (iso < 3 * radii.front()) continue;
      auto sc = separation_scaling(b, bd.branch_values[j], radii);
      slope_lo = std::min(slope_lo, sc.slope);
      slope_hi = std::max(slope_hi, sc.slope);
      ++slopes;
    }
  }
  bool ok = min_sep > 1e-4 && bijective && slopes >= 5 && slope_lo >= 0.4 && slope_hi <= 0.6;
  return {ok, "min separation " + fmt(min_sep) + " over 20 products; slopes in [" + fmt(slope_lo) + ", " +
                  fmt(slope_hi) + "] at " + std::to_string(slopes) + " simple branch values"};
}

Outcome external_oracle() {
  std::ifstream in(std::string(FIXTURE_DIR) + "/oracle_components.json");
  if (!in) return {false, "fixture file missing"};
  auto fx = nlohmann::json::parse(in);
  int good = 0, total = 0;
  std::string detail;
  for (auto& [name, entry] : fx.items()) {
    ++total;
    auto b = BlaschkeProduct::from_json({{"theta", entry["theta"]}, {"zeros", entry["zeros"]}});
    auto out = analyze(b);
    int q = out.report["q_orbitals"];
    int expected = entry["components"];
    good += q == expected && out.report["commutant_dim"] == expected;
    detail += (detail.empty() ? "" : ", ") + name + " q=" + std::to_string(q) + "/" + std::to_string(expected);
  }
  return {total == 3 && good == 3, detail};
}

Outcome exact_rationals() {
  int good = 0, total = 0;
  for (int n = 1; n <= 6; ++n)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k <= 10; ++k) {
        ++total;
        auto [lhs, rhs] = u_i_norm_check(n, i, k);
        std::int64_t num = n, den = static_cast<std::int64_t>(n) * k + i + 1;
        std::int64_t g = std::gcd(num, den);
        good += lhs.num == num / g && lhs.den == den / g && rhs.num == num / g && rhs.den == den / g;
      }
  return {good == total, std::to_string(good) + "/" + std::to_string(total) + " exact equalities n/(nk+i+1)"};
}

Outcome determinism() {
  fs::path dir = fs::temp_directory_path() / ("blaschke_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  fs::path spec = dir / "spec.json";
  std::ofstream(spec) << R"({"theta": 0.9, "zeros": [[0.2,0.3],[-0.4,0.1],[0.1,-0.5],[0.6,0.2],[-0.3,-0.3]]})";
  std::vector<std::string> reports;
  for (int i = 0; i < 3; ++i) {
    fs::path out = dir / ("r" + std::to_string(i) + ".json");
    std::string cmd = std::string(BLASCHKE_TOOL) + " analyze " + spec.string() + " --seed 17 --report " +
                      out.string() + " 2>/dev/null";
    if (std::system(cmd.c_str()) != 0) return {false, "analyze run " + std::to_string(i) + " failed"};
    reports.push_back(slurp(out));
  }
  fs::remove_all(dir);
  bool same = !reports[0].empty() && reports[0] == reports[1] && reports[1] == reports[2];
  return {same, "3 runs, " + std::to_string(reports[0].size()) + " bytes, " + (same ? "identical" : "different")};
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  int failures = 0;
  auto report = [&](int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
    auto t0 = clock::now();
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(clock::now() - t0).count();
    bool in_time = limit_s <= 0 || secs < limit_s;
    bool pass = o.pass && in_time;
    failures += !pass;
    std::cout << (pass ? "PASS" : "FAIL") << "  " << id << "  " << title << ": " << o.detail << " (" << fmt(secs)
              << " s" << (limit_s > 0 ? ", limit " + fmt(limit_s) + " s" : "") << ")" << std::endl;
  };

  const auto products = suite();
  std::vector<SuiteRun> runs;

  report(1, "order-2 count", 5, order_two);
  report(2, "z^n family", 30, zn_family);
  report(3, "commutant dimension equals orbital count", 60, [&] {
    runs = run_suite(products);
    return dimension_equals_orbitals(runs);
  });
  report(4, "commutant is commutative", 0, [&] { return commutativity(runs); });
  report(5, "Gamma intertwines and is isometric", 120, [&] { return gamma(products); });
  report(6, "fiber separation and square-root scaling", 0, [&] { return separation(products); });
  report(7, "external factorization oracle", 0, external_oracle);
  report(8, "exact rational norms", 0, exact_rationals);
  report(9, "deterministic reports", 0, determinism);

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
