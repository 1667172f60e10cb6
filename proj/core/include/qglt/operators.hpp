#pragma once

#include <optional>
#include <vector>

#include "qglt/graph.hpp"
#include "qglt/potential.hpp"

namespace qglt {

enum class OpStructure { star, half_line, line, direct_sum };

enum class VertexBc { kirchhoff, neumann, dirichlet };  // condition at x = 0

// One discretized edge: a tridiagonal chain with constant kinetic
// off-diagonal `off` (= -1/h) and an optional coupling of node 1 to the
// shared vertex unknown.
struct EdgeChain {
  std::vector<double> diag;   // stiffness diagonal: kinetic + potential*weight
  std::vector<double> mass;   // lumped mass weights
  double off = 0.0;           // off-diagonal within the chain
  double coupling = 0.0;      // vertex <-> node 1 entry (0 if detached)
};

struct VertexBlock {
  double diag = 0.0;  // stiffness diagonal
  double mass = 0.0;
};

// Generalized pencil A x = E M x for -d^2/dx^2 + V on a star-shaped mesh:
// an optional shared vertex unknown plus one chain per edge, or a direct sum
// of such operators.  P1 elements with trapezoid (lumped) mass; the potential
// enters through exact element means, so sums of potential entries reproduce
// integrals of V exactly.
class DiscreteOperator {
 public:
  DiscreteOperator() = default;

  static DiscreteOperator direct_sum(std::vector<DiscreteOperator> parts);

  OpStructure structure() const { return structure_; }
  const GridSpec& grid() const { return grid_; }
  int n_unknowns() const;
  int n_chains() const { return static_cast<int>(chains_.size()); }

  bool has_vertex() const { return vertex_.has_value(); }
  const VertexBlock& vertex() const { return *vertex_; }
  const std::vector<EdgeChain>& chains() const { return chains_; }
  const std::vector<DiscreteOperator>& parts() const { return parts_; }

  // Lower bound for the potential part: min element-mean (and 0); the pencil
  // spectrum lies in [min_potential, +inf).
  double min_potential() const { return min_potential_; }
  double max_abs_potential() const { return max_abs_potential_; }

  // assembly helpers (used by the free functions below)
  static DiscreteOperator make(OpStructure s, GridSpec grid, std::optional<VertexBlock> v,
                               std::vector<EdgeChain> chains, double min_potential,
                               double max_abs_potential);

 private:
  OpStructure structure_ = OpStructure::half_line;
  GridSpec grid_{};
  std::optional<VertexBlock> vertex_;
  std::vector<EdgeChain> chains_;
  std::vector<DiscreteOperator> parts_;  // direct_sum only
  double min_potential_ = 0.0;
  double max_abs_potential_ = 0.0;
};

// Kirchhoff star: shared vertex unknown with kinetic diagonal N/h, mass N*h/2,
// coupling -1/h into each edge.
DiscreteOperator assemble_star(const PotentialField& field, const GridSpec& grid);

// Half-line with the given condition at x = 0.  neumann keeps the boundary
// node (kinetic 1/h, mass h/2); dirichlet eliminates it.
DiscreteOperator assemble_half_line(const EdgePotential& profile, const GridSpec& grid,
                                    VertexBc bc);

// Whole line via its two half-line restrictions; the center node x = 0 is an
// ordinary interior node (kinetic 2/h, mass h).
DiscreteOperator assemble_line(const LinePotential& potential, const GridSpec& grid);

// Even N = 2n: decouple the vertex into n free lines, pairing edge i with
// edge n+i (1-based).  Quadratic-form restriction of the star, so star
// eigenvalues dominate cut eigenvalues entrywise.
std::vector<DiscreteOperator> assemble_cut_even(const PotentialField& field,
                                                const GridSpec& grid);

// Split the vertex into two groups S and its complement (1-based edge ids):
// Star(|S|) (+) Star(N - |S|), again a form restriction.  A singleton group
// degenerates to a Neumann half-line.
std::vector<DiscreteOperator> assemble_cut_split(const PotentialField& field,
                                                 const GridSpec& grid,
                                                 const std::vector<int>& group);

}  // namespace qglt
