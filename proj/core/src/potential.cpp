#include "qglt/potential.hpp"

#include <algorithm>
#include <cmath>

#include "qglt/errors.hpp"

namespace qglt {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::schema_error: return "SchemaError";
    case Errc::offset_too_small: return "OffsetTooSmall";
    case Errc::gamma_out_of_range: return "GammaOutOfRange";
    case Errc::support_exceeds_grid: return "SupportExceedsGrid";
    case Errc::odd_edge_count: return "OddEdgeCount";
    case Errc::even_edge_count: return "EvenEdgeCount";
    case Errc::empty_split: return "EmptySplit";
    case Errc::pivot_breakdown: return "PivotBreakdown";
    case Errc::no_convergence: return "NoConvergence";
    case Errc::nonpositive_kappa: return "NonpositiveKappa";
    case Errc::nonpositive_alpha: return "NonpositiveAlpha";
    case Errc::zero_norm: return "ZeroNorm";
    case Errc::parity_violation: return "ParityViolation";
    case Errc::degenerate_spectrum: return "DegenerateSpectrum";
  }
  return "UnknownError";
}

std::string to_string(FarBc bc) { return bc == FarBc::dirichlet ? "dirichlet" : "neumann"; }

FarBc far_bc_from_string(const std::string& s) {
  if (s == "dirichlet") return FarBc::dirichlet;
  if (s == "neumann") return FarBc::neumann;
  throw Error(Errc::invalid_argument, "far bc must be 'dirichlet' or 'neumann', got '" + s + "'");
}

GridSpec GridSpec::from_length(double h, double length, FarBc bc) {
  if (!(h > 0.0)) throw Error(Errc::invalid_argument, "grid step must be > 0");
  int n = static_cast<int>(std::llround(length / h));
  if (n < 2) throw Error(Errc::invalid_argument, "grid too short: needs at least 2 steps");
  return GridSpec(h, n, bc);
}

EdgePotential::EdgePotential(std::vector<Segment> segments) {
  for (size_t i = 0; i < segments.size(); ++i) {
    if (!(segments[i].length > 0.0) || !std::isfinite(segments[i].length))
      throw Error(Errc::invalid_argument, "segment length must be positive and finite");
    if (!std::isfinite(segments[i].value))
      throw Error(Errc::invalid_argument, "segment value must be finite");
  }
  // canonical form: merge equal neighbors, drop the trailing zero tail
  for (const auto& s : segments) {
    if (!segments_.empty() && segments_.back().value == s.value)
      segments_.back().length += s.length;
    else
      segments_.push_back(s);
  }
  while (!segments_.empty() && segments_.back().value == 0.0) segments_.pop_back();

  cum_.reserve(segments_.size());
  double t = 0.0;
  for (const auto& s : segments_) {
    t += s.length;
    cum_.push_back(t);
  }
}

double EdgePotential::support_length() const { return cum_.empty() ? 0.0 : cum_.back(); }

double EdgePotential::min_value() const {
  double m = 0.0;  // implicit zero tail
  for (const auto& s : segments_) m = std::min(m, s.value);
  return m;
}

double EdgePotential::value_at_origin() const {
  return segments_.empty() ? 0.0 : segments_.front().value;
}

double EdgePotential::value_at(double x) const {
  if (segments_.empty() || x <= 0.0 || x > cum_.back()) return 0.0;
  auto it = std::lower_bound(cum_.begin(), cum_.end(), x);
  return segments_[static_cast<size_t>(it - cum_.begin())].value;
}

double EdgePotential::integral(double a, double b) const {
  if (b <= a || segments_.empty()) return 0.0;
  double acc = 0.0, left = 0.0;
  for (size_t k = 0; k < segments_.size(); ++k) {
    double right = cum_[k];
    double lo = std::max(a, left), hi = std::min(b, right);
    if (hi > lo) acc += (hi - lo) * segments_[k].value;
    left = right;
    if (left >= b) break;
  }
  return acc;
}

double EdgePotential::mean_over(double a, double b) const {
  if (!(b > a)) throw Error(Errc::invalid_argument, "mean_over needs b > a");
  return integral(a, b) / (b - a);
}

PotentialField::PotentialField(StarGraph g, std::vector<EdgePotential> edges)
    : graph(g), per_edge(std::move(edges)) {
  if (static_cast<int>(per_edge.size()) != graph.n_edges)
    throw Error(Errc::invalid_argument, "potential field needs one profile per edge");
}

bool PotentialField::is_radial() const {
  for (size_t i = 1; i < per_edge.size(); ++i)
    if (!(per_edge[i] == per_edge[0])) return false;
  return true;
}

double PotentialField::min_value() const {
  double m = 0.0;
  for (const auto& e : per_edge) m = std::min(m, e.min_value());
  return m;
}

PotentialField radial_field(StarGraph graph, const EdgePotential& profile) {
  return PotentialField(graph, std::vector<EdgePotential>(static_cast<size_t>(graph.n_edges), profile));
}

PotentialField zero_field(StarGraph graph) { return radial_field(graph, EdgePotential{}); }

PotentialField transplant(const LinePotential& line, StarGraph graph, int edge_index,
                          double offset, bool radial) {
  if (edge_index < 1 || edge_index > graph.n_edges)
    throw Error(Errc::invalid_argument, "transplant edge_index out of range");
  if (!(offset > 0.0)) throw Error(Errc::invalid_argument, "transplant offset must be positive");
  double left_extent = line.neg.support_length();
  double lead = offset - left_extent;
  if (lead < 0.0)
    throw Error(Errc::offset_too_small,
                "offset smaller than the left support extent of the line potential");

  std::vector<Segment> segs;
  if (lead > 0.0) segs.push_back({lead, 0.0});
  const auto& neg = line.neg.segments();
  for (auto it = neg.rbegin(); it != neg.rend(); ++it) segs.push_back(*it);
  for (const auto& s : line.pos.segments()) segs.push_back(s);
  EdgePotential shifted{segs};

  auto field = zero_field(graph);
  if (radial) {
    field = radial_field(graph, shifted);
  } else {
    field.per_edge[static_cast<size_t>(edge_index - 1)] = shifted;
  }
  return field;
}

double potential_norm(const EdgePotential& profile, double gamma) {
  if (gamma < 0.5)
    throw Error(Errc::gamma_out_of_range, "potential_norm needs gamma >= 1/2");
  double acc = 0.0;
  for (const auto& s : profile.segments())
    if (s.value < 0.0) acc += s.length * std::pow(-s.value, gamma + 0.5);
  return acc;
}

double potential_norm(const LinePotential& line, double gamma) {
  return potential_norm(line.neg, gamma) + potential_norm(line.pos, gamma);
}

double potential_norm(const PotentialField& field, double gamma) {
  double acc = 0.0;
  for (const auto& e : field.per_edge) acc += potential_norm(e, gamma);
  return acc;
}

EdgePotential scale_potential(const EdgePotential& profile, double lambda) {
  if (!(lambda > 0.0)) throw Error(Errc::invalid_argument, "scale factor must be positive");
  std::vector<Segment> segs;
  segs.reserve(profile.segments().size());
  for (const auto& s : profile.segments())
    segs.push_back({s.length / lambda, lambda * lambda * s.value});
  return EdgePotential{segs};
}

}  // namespace qglt
