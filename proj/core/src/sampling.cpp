#include "qglt/sampling.hpp"

#include <algorithm>

namespace qglt {

EdgePotential random_profile(std::mt19937_64& rng, const SampleSpec& spec) {
  std::uniform_int_distribution<int> nseg(1, spec.max_segments);
  std::uniform_real_distribution<double> len(0.2, spec.max_len);
  std::uniform_real_distribution<double> depth(0.1, spec.max_depth);
  std::uniform_real_distribution<double> gate(0.0, 1.0);

  const int n = nseg(rng);
  std::vector<Segment> segs(static_cast<size_t>(n));
  for (auto& s : segs) {
    s.length = len(rng);
    s.value = gate(rng) < 0.25 ? 0.0 : -depth(rng);
  }
  if (std::all_of(segs.begin(), segs.end(), [](const Segment& s) { return s.value == 0.0; }))
    segs.front().value = -depth(rng);
  return EdgePotential{std::move(segs)};
}

PotentialField random_field(std::mt19937_64& rng, int n_edges, const SampleSpec& spec) {
  std::vector<EdgePotential> edges;
  edges.reserve(static_cast<size_t>(n_edges));
  for (int e = 0; e < n_edges; ++e) edges.push_back(random_profile(rng, spec));
  return PotentialField{StarGraph{n_edges}, std::move(edges)};
}

PotentialField random_radial_field(std::mt19937_64& rng, int n_edges, const SampleSpec& spec) {
  return radial_field(StarGraph{n_edges}, random_profile(rng, spec));
}

}  // namespace qglt
