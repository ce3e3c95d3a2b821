#include "blaschke/analysis.hpp"

#include <cmath>
#include <vector>

#include "blaschke/bundle.hpp"
#include "blaschke/commutant.hpp"
#include "blaschke/error.hpp"
#include "blaschke/monodromy.hpp"

namespace blaschke {

namespace {

nlohmann::json point(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

nlohmann::json matrix_pairs(const Eigen::MatrixXcd& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(point(m(r, c)));
  return out;
}

}  // namespace

nlohmann::json config_to_json(const Config& cfg) {
  return {{"root_tol", cfg.root_tol},
          {"root_merge_cap", cfg.root_merge_cap},
          {"root_max_iter", cfg.root_max_iter},
          {"newton_tol", cfg.newton_tol},
          {"dedup_tol", cfg.dedup_tol},
          {"step_floor", cfg.step_floor},
          {"svd_rel_threshold", cfg.svd_rel_threshold},
          {"eigen_gap", cfg.eigen_gap},
          {"commutator_tol", cfg.commutator_tol},
          {"group_cap", cfg.group_cap},
          {"route_offset", cfg.route_offset},
          {"exclusion_radius", cfg.exclusion_radius},
          {"boundary_annulus", cfg.boundary_annulus}};
}

AnalysisOutcome analyze(const BlaschkeProduct& b, const Config& cfg) {
  const int n = b.order();
  MonodromyRep rep = compute_representation(b, cfg);

  nlohmann::json checks = nlohmann::json::object();
  bool all = true;
  auto record = [&](const std::string& name, bool pass, nlohmann::json evidence) {
    evidence["pass"] = pass;
    checks[name] = std::move(evidence);
    all = all && pass;
  };

  nlohmann::json group_order;
  try {
    group_order = group_closure(rep.generators, n, cfg.group_cap).size();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::GroupTooLarge && e.kind() != ErrorKind::InvalidInput) throw;
    group_order = "exceeds cap";
  }
  const bool transitive = is_transitive(rep.generators, n);
  const int q = orbital_count(rep.generators, n);
  CommutantBasis cb = commutant_basis(rep.generators, n, cfg.svd_rel_threshold);
  auto [commutative, max_comm] = is_commutative(cb, cfg.commutator_tol);

  std::vector<Eigen::MatrixXcd> projections;
  int retries = 0;
  if (commutative) {
    auto pr = minimal_projections(cb, cfg.seed, cfg.eigen_gap, cfg.commutator_tol);
    projections = std::move(pr.projections);
    retries = pr.retries;
  }

  record("orbitals_equal_commutant_dim", q == cb.dim, {{"q_orbitals", q}, {"commutant_dim", cb.dim}});
  record("commutant_is_commutative", commutative, {{"max_commutator", max_comm}, {"tol", cfg.commutator_tol}});
  record("covering_is_connected", transitive, nlohmann::json::object());
  record("boundary_is_n_cycle", rep.boundary_perm.is_full_cycle(),
         {{"boundary_perm", rep.boundary_perm.images()}});
  record("boundary_equals_generator_product", rep.boundary_perm == rep.boundary_product,
         {{"tracked", rep.boundary_perm.images()}, {"product", rep.boundary_product.images()}});
  record("basis_commutes_with_generators", cb.max_residual <= 1e-10, {{"max_residual", cb.max_residual}});

  std::vector<int> ranks;
  if (commutative) {
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(n, n);
    double worst_commute = 0.0;
    for (const auto& p : projections) {
      sum += p;
      ranks.push_back(static_cast<int>(std::lround(p.trace().real())));
      for (const auto& g : rep.generators) {
        Eigen::MatrixXcd v = permutation_unitary(g);
        worst_commute = std::max(worst_commute, (p * v - v * p).norm());
      }
    }
    double identity_gap = (sum - Eigen::MatrixXcd::Identity(n, n)).norm();
    record("projections_resolve_identity", identity_gap <= 1e-8 && static_cast<int>(projections.size()) == cb.dim,
           {{"identity_gap", identity_gap}, {"count", projections.size()}});
    record("projections_reduce_generators", worst_commute <= 1e-8, {{"max_commutator", worst_commute}});
  }

  nlohmann::json crit = nlohmann::json::array();
  for (const auto& c : rep.branch.critical_points)
    crit.push_back({{"center", point(c.center)}, {"multiplicity", c.multiplicity}});
  nlohmann::json branch = nlohmann::json::array();
  for (cplx v : rep.branch_values) branch.push_back(point(v));
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : rep.generators) gens.push_back(g.images());
  nlohmann::json proj = nlohmann::json::array();
  for (const auto& p : projections) proj.push_back(matrix_pairs(p));

  nlohmann::json report = {{"schema", "1"},
                           {"input", b.to_json()},
                           {"order", n},
                           {"base_point", point(rep.base)},
                           {"critical_points", crit},
                           {"branch_values", branch},
                           {"generators", gens},
                           {"boundary_perm", rep.boundary_perm.images()},
                           {"group_order", group_order},
                           {"transitive", transitive},
                           {"q_orbitals", q},
                           {"commutant_dim", cb.dim},
                           {"commutative", commutative},
                           {"max_commutator", max_comm},
                           {"num_minimal_projections", projections.size()},
                           {"projection_ranks", ranks},
                           {"projection_retries", retries},
                           {"projections", proj},
                           {"theorem_checks", checks},
                           {"tolerances", config_to_json(cfg)},
                           {"seed", cfg.seed}};
  return {report, all};
}

GammaOutcome verify_gamma(const BlaschkeProduct& b, const GammaOptions& opts, const Config& cfg) {
  std::vector<Poly> polys{Poly::monomial(0), Poly::monomial(1), Poly::monomial(2)};
  IsometryOptions io;
  io.budget = opts.budget;
  io.seed = cfg.seed;
  io.exclusion_radius = cfg.exclusion_radius;
  io.boundary_annulus = cfg.boundary_annulus;
  IsometryResult iso = isometry_gram(b, polys, io, cfg);

  InverseBranches inv = InverseBranches::standard(b, cfg);
  double intertwining = verify_intertwining(inv, polys, opts.samples, cfg.seed);
  DisjointnessResult disjoint = verify_disjoint_images(inv, std::max(opts.samples, 100), cfg.seed + 1);

  bool pass = iso.relative_error <= opts.isometry_bound && intertwining <= opts.intertwining_bound &&
              disjoint.bijective && disjoint.min_separation > 0.0;
  nlohmann::json report = {{"schema", "1"},
                           {"input", b.to_json()},
                           {"isometry_error", iso.relative_error},
                           {"intertwining_residual", intertwining},
                           {"min_separation", disjoint.min_separation},
                           {"excluded_mass_bound", iso.excluded_mass_bound},
                           {"exclusion_radii", iso.disc_radii},
                           {"evaluated_samples", iso.evaluated_samples},
                           {"budget", opts.budget},
                           {"samples", opts.samples},
                           {"seed", cfg.seed},
                           {"pass", pass}};
  return {report, pass};
}

}  // namespace blaschke
