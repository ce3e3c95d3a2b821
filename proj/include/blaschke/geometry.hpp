#pragma once

#include <span>
#include <variant>
#include <vector>

#include "blaschke/cpoly.hpp"

namespace blaschke {

struct Line {
  cplx start;
  cplx end;
};

/// Counterclockwise when angle_to > angle_from.
struct Arc {
  cplx center;
  double radius = 0.0;
  double angle_from = 0.0;
  double angle_to = 0.0;
};

using Segment = std::variant<Line, Arc>;

double length(const Segment& s);
/// Point at arc length s along the segment, s in [0, length].
cplx point_at(const Segment& s, double arclen);
cplx start_of(const Segment& s);
cplx end_of(const Segment& s);
Segment reversed(const Segment& s);
double distance(const Segment& s, cplx p);

/// Distance from p to the closed segment [a, b].
double segment_distance(cplx a, cplx b, cplx p);
/// Minimum distance between two closed segments (0 if they intersect).
double segments_distance(cplx a, cplx b, cplx c, cplx d);

/// A piecewise path through the disc with its clearance from a point set.
struct PathSpec {
  std::vector<Segment> segments;
  double clearance = 0.0;
  std::vector<cplx> obstacles;  // points the path avoids; they bound tracking steps

  /// Checks continuity and computes clearance against obstacles.
  static PathSpec make(std::vector<Segment> segments, std::span<const cplx> obstacles);

  double length() const;
  cplx start() const;
  cplx end() const;
  bool closed(double tol = 1e-12) const;
  PathSpec reversed() const;
  /// The path followed by other (end of this must meet start of other).
  PathSpec then(const PathSpec& other) const;
};

/// Minimum distance from any point of the path to any obstacle.
double path_clearance(const std::vector<Segment>& segments, std::span<const cplx> obstacles);

/// Winding number of a closed path about p from summed argument increments.
double winding_number(const PathSpec& path, cplx p);

}  // namespace blaschke
