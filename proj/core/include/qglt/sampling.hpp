#pragma once

#include <random>

#include "qglt/potential.hpp"

namespace qglt {

// Frozen sampling distribution for reproducible randomized checks: segment
// count uniform in {1..max_segments}, lengths uniform in [0.2, max_len],
// values 0 with probability 1/4 and uniform in [-max_depth, -0.1] otherwise.
// A profile that came out identically zero gets its first segment forced
// negative so ratio checks stay well-defined.
struct SampleSpec {
  int max_segments = 3;
  double max_len = 1.5;
  double max_depth = 4.0;
};

EdgePotential random_profile(std::mt19937_64& rng, const SampleSpec& spec = {});

// Independent profiles per edge (non-radial with probability 1).
PotentialField random_field(std::mt19937_64& rng, int n_edges, const SampleSpec& spec = {});

// One shared profile on all edges.
PotentialField random_radial_field(std::mt19937_64& rng, int n_edges,
                                   const SampleSpec& spec = {});

}  // namespace qglt
