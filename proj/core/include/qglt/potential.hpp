#pragma once

#include <vector>

#include "qglt/errors.hpp"
#include "qglt/graph.hpp"

namespace qglt {

// One piece of a piecewise-constant profile: `value` on an interval of the
// given positive length.
struct Segment {
  double length = 0.0;
  double value = 0.0;

  bool operator==(const Segment&) const = default;
};

// Piecewise-constant potential on a half-line edge, supported on [0, support];
// identically zero beyond the last segment.  Stored in canonical form:
// adjacent equal values merged, trailing zero-value segments dropped, so two
// EdgePotentials describe the same function iff their segment lists compare
// equal.
class EdgePotential {
 public:
  EdgePotential() = default;
  explicit EdgePotential(std::vector<Segment> segments);

  const std::vector<Segment>& segments() const { return segments_; }
  bool is_zero() const { return segments_.empty(); }

  double support_length() const;
  // min over segment values and the implicit zero tail
  double min_value() const;
  double max_depth() const { return -min_value(); }

  // Value on the first segment (0 for the zero potential): the limit V(0+).
  double value_at_origin() const;

  // Value at x > 0 with segments read as half-open cells (t_{k-1}, t_k].
  double value_at(double x) const;

  // Exact integral of V over [a, b] (0 <= a <= b), and its mean.
  double integral(double a, double b) const;
  double mean_over(double a, double b) const;

  bool operator==(const EdgePotential& o) const = default;

 private:
  std::vector<Segment> segments_;
  std::vector<double> cum_;  // cumulative right endpoints of segments_
};

// Potential on the real line given by its two half-line restrictions;
// neg(s) is the value at x = -s for s > 0.
struct LinePotential {
  EdgePotential neg, pos;
};

inline LinePotential symmetric_extension(const EdgePotential& p) { return {p, p}; }

// Potential on a star: one profile per edge.
struct PotentialField {
  StarGraph graph;
  std::vector<EdgePotential> per_edge;

  PotentialField() = default;
  PotentialField(StarGraph g, std::vector<EdgePotential> edges);

  const EdgePotential& edge(int i) const { return per_edge.at(static_cast<size_t>(i)); }
  // All edges carry the identical canonical profile.
  bool is_radial() const;
  double min_value() const;
  double max_depth() const { return -min_value(); }
};

PotentialField radial_field(StarGraph graph, const EdgePotential& profile);
PotentialField zero_field(StarGraph graph);

// Places the line potential translated by +offset onto edge `edge_index`
// (1-based); the part of the translate at x < 0 maps onto the leading part of
// the edge, so `offset` must be >= the support extent of the negative side.
// With radial = true the same translate is placed on every edge.
PotentialField transplant(const LinePotential& line, StarGraph graph, int edge_index,
                          double offset, bool radial = false);

// sum over edges and segments of len * max(0, -val)^(gamma + 1/2)
double potential_norm(const EdgePotential& profile, double gamma);
double potential_norm(const LinePotential& line, double gamma);
double potential_norm(const PotentialField& field, double gamma);

// x -> lambda^2 V(lambda x): segment (len, val) -> (len/lambda, lambda^2 val).
EdgePotential scale_potential(const EdgePotential& profile, double lambda);

}  // namespace qglt
