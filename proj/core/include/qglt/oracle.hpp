#pragma once

#include <vector>

#include "qglt/potential.hpp"
#include "qglt/spectrum.hpp"

namespace qglt {

// Analytic (grid-free) bound states for piecewise-constant potentials via
// transfer matrices: on a segment with V + kappa^2 = mu^2 > 0 the solution is
// spanned by cosh/sinh(mu t), for V + kappa^2 < 0 by cos/sin, linear in the
// degenerate case.  E = -kappa^2.

// Decaying-solution boundary data at x = 0: u(0), u'(0), up to one positive
// per-edge normalization factor.
struct BoundaryData {
  double u = 1.0;
  double du = 0.0;
};

BoundaryData decaying_solution(const EdgePotential& profile, double kappa);

// Dirichlet-to-Neumann value m(kappa) = u'(0)/u(0) of the decaying solution;
// +/-inf at vertex-vanishing kappa.  Zero potential gives exactly -kappa.
// Strictly decreasing in kappa between singularities.
double dtn_value(const EdgePotential& profile, double kappa);

enum class RootType { kirchhoff, vertex_dirichlet, neumann, dirichlet };

struct SecularRoot {
  double kappa = 0.0;
  double energy = 0.0;  // -kappa^2
  int multiplicity = 1;
  RootType type = RootType::kirchhoff;
};

struct SecularResult {
  std::vector<SecularRoot> roots;  // ascending in energy
  Spectrum spectrum;               // multiplicities expanded to repeats
  bool scan_too_coarse = false;    // refinement x10 changed the root count
  int scan_points = 0;
};

struct ScanOptions {
  int scan_points = 2000;        // >= 1000 per the coarse-scan contract
  double kappa_min = 1e-6;
  double bracket_tol = 1e-12;    // final bisection bracket width (relative)
  double vanish_tol = 1e-7;      // |u(0)| below this (relative) = Dirichlet-type
  double cluster_tol = 1e-9;     // kappa clustering across edges
};

// kappa_max >= sqrt(max edge depth); default adds +1.
double default_kappa_max(const PotentialField& field);

// Kirchhoff bound states: zeros of sum_j m_j(kappa) (pole-free form
// W = sum_j u_j' prod_{i != j} u_i), plus vertex-Dirichlet states where >= 2
// edges admit decaying solutions vanishing at the vertex (multiplicity
// count-1).  Throws Errc::nonpositive_kappa for kappa_max <= 0.
SecularResult secular_bound_states(const PotentialField& field, double kappa_max,
                                   const ScanOptions& opts = {});
SecularResult secular_bound_states(const PotentialField& field);

// Half-line with Neumann (u'(0) = 0) or Dirichlet (u(0) = 0) condition.
SecularResult half_line_bound_states(const EdgePotential& profile, VertexBc bc,
                                     double kappa_max, const ScanOptions& opts = {});

// Line potential = 2-star in disguise.
SecularResult line_bound_states(const LinePotential& line, double kappa_max,
                                const ScanOptions& opts = {});

// -alpha^2/4, the single bound state of -alpha*delta on the line.
// Throws Errc::nonpositive_alpha for alpha <= 0.
double delta_line_eigenvalue(double alpha);

}  // namespace qglt
