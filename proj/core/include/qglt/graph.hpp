#pragma once

#include <string>

#include "qglt/errors.hpp"

namespace qglt {

// Star metric graph: N >= 1 half-lines glued at one Kirchhoff vertex.
// N = 1 is the Neumann half-line, N = 2 is the full line.
struct StarGraph {
  int n_edges = 1;

  StarGraph() = default;
  explicit StarGraph(int n) : n_edges(n) {
    if (n < 1) throw Error(Errc::invalid_argument, "star graph needs n_edges >= 1");
  }
};

enum class FarBc { dirichlet, neumann };

std::string to_string(FarBc bc);
FarBc far_bc_from_string(const std::string& s);

// Uniform grid on one edge: nodes at i*h for i = 0..n, truncated at L = n*h.
// The far boundary condition decides whether the node at L is an unknown
// (neumann) or eliminated (dirichlet).
struct GridSpec {
  double step = 0.01;
  int points_per_edge = 3000;
  FarBc far_bc = FarBc::dirichlet;

  GridSpec() = default;
  GridSpec(double h, int n, FarBc bc = FarBc::dirichlet)
      : step(h), points_per_edge(n), far_bc(bc) {
    if (!(h > 0.0)) throw Error(Errc::invalid_argument, "grid step must be > 0");
    if (n < 2) throw Error(Errc::invalid_argument, "grid needs points_per_edge >= 2");
  }

  double edge_length() const { return step * points_per_edge; }

  // Rounds length to the nearest multiple of h so that L = n*h holds exactly.
  static GridSpec from_length(double h, double length, FarBc bc = FarBc::dirichlet);
};

}  // namespace qglt
