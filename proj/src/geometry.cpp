#include "blaschke/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "blaschke/error.hpp"

namespace blaschke {

namespace {
constexpr double kTwoPi = 2 * std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

double length(const Segment& s) {
  return std::visit(overloaded{[](const Line& l) { return std::abs(l.end - l.start); },
                               [](const Arc& a) { return a.radius * std::abs(a.angle_to - a.angle_from); }},
                    s);
}

cplx point_at(const Segment& s, double arclen) {
  return std::visit(overloaded{[&](const Line& l) {
                                 double len = std::abs(l.end - l.start);
                                 if (len == 0.0) return l.start;
                                 double t = std::clamp(arclen / len, 0.0, 1.0);
                                 if (t == 1.0) return l.end;
                                 return l.start + t * (l.end - l.start);
                               },
                               [&](const Arc& a) {
                                 double sweep = a.angle_to - a.angle_from;
                                 double len = a.radius * std::abs(sweep);
                                 double t = len == 0.0 ? 0.0 : std::clamp(arclen / len, 0.0, 1.0);
                                 return a.center + std::polar(a.radius, a.angle_from + t * sweep);
                               }},
                    s);
}

cplx start_of(const Segment& s) { return point_at(s, 0.0); }
cplx end_of(const Segment& s) { return point_at(s, length(s)); }

Segment reversed(const Segment& s) {
  return std::visit(overloaded{[](const Line& l) -> Segment { return Line{l.end, l.start}; },
                               [](const Arc& a) -> Segment {
                                 return Arc{a.center, a.radius, a.angle_to, a.angle_from};
                               }},
                    s);
}

double segment_distance(cplx a, cplx b, cplx p) {
  cplx d = b - a;
  double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(p - a);
  double t = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

namespace {
double cross(cplx u, cplx v) { return u.real() * v.imag() - u.imag() * v.real(); }
}  // namespace

double segments_distance(cplx a, cplx b, cplx c, cplx d) {
  double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return 0.0;
  return std::min({segment_distance(a, b, c), segment_distance(a, b, d), segment_distance(c, d, a),
                   segment_distance(c, d, b)});
}

double distance(const Segment& s, cplx p) {
  return std::visit(overloaded{[&](const Line& l) { return segment_distance(l.start, l.end, p); },
                               [&](const Arc& a) {
                                 double sweep = a.angle_to - a.angle_from;
                                 double lo = std::min(a.angle_from, a.angle_to);
                                 bool inside = std::abs(sweep) >= kTwoPi;
                                 if (!inside && p != a.center) {
                                   double phi = std::arg(p - a.center);
                                   double rel = std::fmod(phi - lo, kTwoPi);
                                   if (rel < 0) rel += kTwoPi;
                                   inside = rel <= std::abs(sweep);
                                 }
                                 if (inside || p == a.center) return std::abs(std::abs(p - a.center) - a.radius);
                                 return std::min(std::abs(p - start_of(Segment(a))), std::abs(p - end_of(Segment(a))));
                               }},
                    s);
}

double path_clearance(const std::vector<Segment>& segments, std::span<const cplx> obstacles) {
  double c = std::numeric_limits<double>::infinity();
  for (const auto& s : segments)
    for (cplx o : obstacles) c = std::min(c, distance(s, o));
  return c;
}

PathSpec PathSpec::make(std::vector<Segment> segments, std::span<const cplx> obstacles) {
  for (std::size_t i = 1; i < segments.size(); ++i) {
    if (std::abs(end_of(segments[i - 1]) - start_of(segments[i])) > 1e-12)
      throw Error(ErrorKind::InvalidInput, "tracking", "consecutive path segments do not share endpoints");
  }
  PathSpec p;
  p.clearance = path_clearance(segments, obstacles);
  p.segments = std::move(segments);
  p.obstacles.assign(obstacles.begin(), obstacles.end());
  return p;
}

double PathSpec::length() const {
  double s = 0.0;
  for (const auto& seg : segments) s += blaschke::length(seg);
  return s;
}

cplx PathSpec::start() const { return segments.empty() ? cplx(0.0) : start_of(segments.front()); }
cplx PathSpec::end() const { return segments.empty() ? cplx(0.0) : end_of(segments.back()); }
bool PathSpec::closed(double tol) const { return std::abs(start() - end()) <= tol; }

PathSpec PathSpec::reversed() const {
  PathSpec r;
  r.clearance = clearance;
  r.obstacles = obstacles;
  for (auto it = segments.rbegin(); it != segments.rend(); ++it) r.segments.push_back(blaschke::reversed(*it));
  return r;
}

PathSpec PathSpec::then(const PathSpec& other) const {
  if (!segments.empty() && !other.segments.empty() && std::abs(end() - other.start()) > 1e-12)
    throw Error(ErrorKind::InvalidInput, "tracking", "paths do not join");
  PathSpec r = *this;
  r.segments.insert(r.segments.end(), other.segments.begin(), other.segments.end());
  r.clearance = std::min(clearance, other.clearance);
  for (cplx o : other.obstacles)
    if (std::find(r.obstacles.begin(), r.obstacles.end(), o) == r.obstacles.end()) r.obstacles.push_back(o);
  return r;
}

double winding_number(const PathSpec& path, cplx p) {
  double total = 0.0;
  for (const auto& seg : path.segments) {
    double len = blaschke::length(seg);
    double d = std::max(distance(seg, p), 1e-12);
    int pieces = std::max(64, static_cast<int>(std::ceil(8 * len / d)));
    cplx prev = start_of(seg) - p;
    for (int k = 1; k <= pieces; ++k) {
      cplx cur = point_at(seg, len * k / pieces) - p;
      total += std::arg(cur / prev);
      prev = cur;
    }
  }
  return total / kTwoPi;
}

}  // namespace blaschke
