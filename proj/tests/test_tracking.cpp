#include <doctest.h>

#include <algorithm>
#include <random>

#include "blaschke/error.hpp"
#include "blaschke/tracking.hpp"

using namespace blaschke;

namespace {

constexpr double kTwoPi = 6.283185307179586;

BlaschkeProduct random_product(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> r(0.0, 0.8), a(0.0, kTwoPi);
  std::vector<cplx> zeros;
  for (int i = 0; i < n; ++i) zeros.push_back(std::polar(r(rng), a(rng)));
  return BlaschkeProduct(a(rng), zeros);
}

PathSpec circle(cplx center, double radius, double phase, std::span<const cplx> obstacles) {
  return PathSpec::make({Arc{center, radius, phase, phase + kTwoPi}}, obstacles);
}

double hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double h = 0.0;
  for (cplx p : a) {
    double d = 1e9;
    for (cplx q : b) d = std::min(d, std::abs(p - q));
    h = std::max(h, d);
  }
  for (cplx q : b) {
    double d = 1e9;
    for (cplx p : a) d = std::min(d, std::abs(p - q));
    h = std::max(h, d);
  }
  return h;
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::InvalidInput;
}

}  // namespace

TEST_CASE("initial fibers") {
  auto f = initial_fiber(BlaschkeProduct::power(2), 0.25);
  REQUIRE(f.points.size() == 2);
  CHECK(std::abs(f.points[0] + 0.5) < 1e-14);
  CHECK(std::abs(f.points[1] - 0.5) < 1e-14);
  CHECK(f.separation == doctest::Approx(1.0));

  auto g = initial_fiber(BlaschkeProduct::power(3), 0.125);
  REQUIRE(g.points.size() == 3);
  for (cplx p : g.points) {
    CHECK(std::abs(std::abs(p) - 0.5) < 1e-14);
    CHECK(std::abs(p * p * p - 0.125) < 1e-14);
  }

  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    auto b = random_product(rng, 3);
    cplx w0 = std::polar(0.6, 0.7 * trial);
    auto fib = initial_fiber(b, w0);
    for (cplx p : fib.points) CHECK(std::abs(b(p) - w0) < 1e-12);
    CHECK(fib.separation > 0.0);
    CHECK(std::is_sorted(fib.points.begin(), fib.points.end(), [](cplx x, cplx y) {
      return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag());
    }));
  }
}

TEST_CASE("fiber over a branch value collides") {
  CHECK(kind_of([] { initial_fiber(BlaschkeProduct::power(2), 0.0); }) == ErrorKind::FiberCollision);
}

TEST_CASE("base point choice") {
  std::vector<cplx> origin{0.0};
  cplx w0 = choose_base_point(origin);
  // The optimum of min(|w|, 1 - |w|) is 1/2; the grid spacing is 2/63.
  CHECK(std::abs(std::abs(w0) - 0.5) < 2.0 / 63.0);
  CHECK(choose_base_point(std::vector<cplx>{}) == cplx(0.0));
}

TEST_CASE("loop geometry") {
  SUBCASE("single branch value") {
    std::vector<cplx> s{0.0};
    cplx w0(0.5, 0.0);
    auto sys = build_loops(s, w0);
    REQUIRE(sys.loops.size() == 1);
    CHECK(sys.head_radii[0] == doctest::Approx(0.5 / 3));
    CHECK(sys.loops[0].closed());
    CHECK(std::abs(sys.loops[0].start() - w0) < 1e-15);
    CHECK(winding_number(sys.loops[0], 0.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(winding_number(sys.boundary_loop, 0.0) == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("opposite sides of the base point") {
    std::vector<cplx> s{cplx(0.4, 0.0), cplx(-0.4, 0.0)};
    auto sys = build_loops(s, cplx(0.0, 0.1));
    REQUIRE(sys.loops.size() == 2);
    // Sorted by arg(beta - w0) in (-pi, pi]: -0.4 - 0.1i comes first.
    CHECK(sys.branch_values[0] == cplx(-0.4, 0.0));
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        CHECK(winding_number(sys.loops[i], sys.branch_values[j]) ==
              doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-9));
  }
  SUBCASE("clustered and collinear branch values") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.6, 0.6);
    std::vector<std::vector<cplx>> sets{{0.0, cplx(-0.0223, 0.0)},
                                        {cplx(0.1, 0.0), cplx(0.2, 0.0), cplx(0.3, 0.0), cplx(-0.2, 0.0)}};
    for (int t = 0; t < 10; ++t) {
      std::vector<cplx> s;
      for (int k = 0; k < 5; ++k) s.emplace_back(u(rng), u(rng));
      sets.push_back(s);
    }
    for (const auto& s : sets) {
      cplx w0 = choose_base_point(s);
      auto sys = build_loops(s, w0);
      REQUIRE(sys.loops.size() == s.size());
      for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(sys.loops[i].closed());
        CHECK(sys.loops[i].clearance > 0.0);
        for (std::size_t j = 0; j < s.size(); ++j)
          CHECK(winding_number(sys.loops[i], sys.branch_values[j]) ==
                doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-9));
        CHECK(winding_number(sys.boundary_loop, s[i]) == doctest::Approx(1.0).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("square root monodromy") {
  auto b = BlaschkeProduct::power(2);
  auto f = initial_fiber(b, 0.25);
  std::vector<cplx> origin{0.0};
  auto res = track(b, f, circle(0.0, 0.25, 0.0, origin));
  CHECK(std::abs(res.end.points[0] - 0.5) < 1e-10);
  CHECK(std::abs(res.end.points[1] + 0.5) < 1e-10);
  CHECK(loop_permutation(b, f, circle(0.0, 0.25, 0.0, origin)) == Permutation::transposition(2, 0, 1));
}

TEST_CASE("empty path leaves the fiber unchanged") {
  auto b = BlaschkeProduct::power(3);
  auto f = initial_fiber(b, 0.3);
  auto res = track(b, f, PathSpec{});
  CHECK(res.end.points == f.points);
  CHECK(res.accepted_steps == 0);
}

TEST_CASE("n-th root monodromy is an n-cycle") {
  for (int n = 2; n <= 8; ++n) {
    auto b = BlaschkeProduct::power(n);
    auto f = initial_fiber(b, cplx(0.5, 0.0));
    std::vector<cplx> origin{0.0};
    auto tau = loop_permutation(b, f, circle(0.0, 0.5, 0.0, origin));
    CHECK(tau.is_full_cycle());
  }
}

TEST_CASE("loops around no branch value are trivial") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    auto b = random_product(rng, 2 + trial % 4);
    auto bd = branch_data(b);
    // A circle far enough from every branch value.
    cplx center;
    double radius = 0.0;
    for (int k = 0; k < 64 && radius < 0.02; ++k) {
      center = std::polar(0.05 + 0.01 * k, 0.9 * k);
      double d = 1.0 - std::abs(center);
      for (cplx beta : bd.branch_values) d = std::min(d, std::abs(center - beta));
      radius = d / 2;
    }
    REQUIRE(radius >= 0.02);
    cplx w0 = center + radius;
    auto f = initial_fiber(b, w0);
    auto loop = circle(center, radius, 0.0, bd.branch_values);
    auto res = track(b, f, loop);
    for (std::size_t i = 0; i < f.points.size(); ++i) CHECK(std::abs(res.end.points[i] - f.points[i]) < 1e-9);
    CHECK(loop_permutation(b, f, loop).is_identity());
  }
}

TEST_CASE("tracking invariants along lollipop loops") {
  Config cfg;
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 8; ++trial) {
    auto b = random_product(rng, 3 + trial % 3);
    auto bd = branch_data(b, cfg);
    cplx w0 = choose_base_point(bd.branch_values);
    auto sys = build_loops(bd.branch_values, w0);
    auto f = initial_fiber(b, w0, cfg);
    for (const auto& loop : sys.loops) {
      auto res = track(b, f, loop, cfg, true);
      CHECK(res.trace.size() == res.accepted_steps + 1);
      double worst = 0.0;
      for (const auto& row : res.trace)
        for (cplx z : row.z) worst = std::max(worst, std::abs(b(z) - row.w));
      CHECK(worst <= cfg.newton_tol);
      CHECK(res.min_separation > 10 * cfg.newton_tol);
      CHECK(hausdorff(res.end.points, f.points) < 1e-9);
    }
  }
}

TEST_CASE("tracking a path and its reverse returns home") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 6; ++trial) {
    auto b = random_product(rng, 4);
    auto bd = branch_data(b);
    cplx w0 = choose_base_point(bd.branch_values);
    auto sys = build_loops(bd.branch_values, w0);
    auto f = initial_fiber(b, w0);
    // Out along the first half of the first loop's stem-and-head, then back.
    const auto& loop = sys.loops[0];
    PathSpec half = PathSpec::make({loop.segments.begin(), loop.segments.begin() + 2}, bd.branch_values);
    auto there = track(b, f, half);
    auto back = track(b, there.end, half.reversed());
    for (std::size_t i = 0; i < f.points.size(); ++i) CHECK(std::abs(back.end.points[i] - f.points[i]) < 1e-9);
    CHECK(match_fibers(f.points, back.end.points, f.separation / 3).is_identity());
  }
}

TEST_CASE("path through a branch value fails") {
  auto b = BlaschkeProduct::power(2);
  auto f = initial_fiber(b, 0.25);
  PathSpec through;
  through.segments = {Line{0.25, -0.25}};
  auto k = kind_of([&] { track(b, f, through); });
  CHECK((k == ErrorKind::StepFloorReached || k == ErrorKind::FiberCollision));
}

TEST_CASE("path must start at the fiber value") {
  auto b = BlaschkeProduct::power(2);
  auto f = initial_fiber(b, 0.25);
  PathSpec p;
  p.segments = {Line{0.3, 0.4}};
  CHECK(kind_of([&] { track(b, f, p); }) == ErrorKind::InvalidInput);
}

TEST_CASE("matching") {
  std::vector<cplx> ref{0.0, 1.0, 2.0};
  std::vector<cplx> moved{2.01, 0.0, 0.99};
  auto tau = match_fibers(ref, moved, 0.3);
  CHECK(tau.images() == std::vector<int>{2, 0, 1});
  std::vector<cplx> far{0.5, 1.0, 2.0};
  CHECK(kind_of([&] { match_fibers(ref, far, 0.3); }) == ErrorKind::AmbiguousMatching);
}

TEST_CASE("separation near a simple branch value scales like a square root") {
  BlaschkeProduct b(0.0, {0.0, 0.0, 0.5});
  auto bd = branch_data(b);
  const std::vector<double> radii{1e-2, 1e-3, 1e-4};
  for (std::size_t j = 0; j < bd.branch_values.size(); ++j) {
    int mult = 0;
    for (int c : bd.critical_over[j]) mult += bd.critical_points[static_cast<std::size_t>(c)].multiplicity;
    if (mult != 1 || bd.critical_over[j].size() != 1) continue;
    auto sc = separation_scaling(b, bd.branch_values[j], radii);
    CHECK(sc.slope == doctest::Approx(0.5).epsilon(0.2));
    CHECK(std::is_sorted(sc.separations.rbegin(), sc.separations.rend()));
  }
}
