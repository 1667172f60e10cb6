#pragma once

#include <complex>
#include <vector>

#include "qglt/lieb_thirring.hpp"
#include "qglt/operators.hpp"
#include "qglt/spectrum.hpp"

namespace qglt {

// Complex-valued mesh function on a star (vertex + per-edge chains); the
// playground for the cyclic-symmetry projections.
struct StarFunction {
  std::complex<double> vertex{0.0, 0.0};
  std::vector<std::vector<std::complex<double>>> edges;
};

// DFT projection onto the sector where rotating the edges by one step
// multiplies the function by omega^ell, omega = exp(2 pi i / N):
//   (P_ell psi)_k = (1/N) sum_j omega^(ell (k - j)) psi_j.
// ell = 0 keeps the vertex value; every other sector vanishes at the vertex.
StarFunction project_sector(const StarFunction& psi, int ell);

// A psi and M psi for a radial star operator applied entrywise to a complex
// star function (used to check that projections commute with the operator).
StarFunction apply_stiffness(const DiscreteOperator& op, const StarFunction& psi);
StarFunction apply_mass(const DiscreteOperator& op, const StarFunction& psi);

// Radial star = Neumann half-line (+) (N-1) x Dirichlet half-line, exactly at
// the matrix level.
struct SectorDecomposition {
  DiscreteOperator neumann;
  DiscreteOperator dirichlet;
  int dirichlet_multiplicity = 0;
};

SectorDecomposition decompose_radial(const EdgePotential& profile, int n_edges,
                                     const GridSpec& grid);

struct SectorIdentityReport {
  int n_edges = 1;
  double gamma = 0.5;
  double trace_star = 0.0;
  double trace_sectors = 0.0;      // tr^0 + (N-1) tr^1
  double residual = 0.0;           // |trace_star - trace_sectors|
  double tolerance = 0.0;          // 1e-8 * (1 + trace_star)
  int count_star = 0;
  int count_sectors = 0;
  double multiset_max_diff = 0.0;  // max |star_k - merged_k| over sorted spectra
  double key_identity_residual = 0.0;  // vs line + (N-2) Dirichlet traces
  bool passed = false;
};

// Verifies tr(star)_-^gamma = tr(Neumann)_-^gamma + (N-1) tr(Dirichlet)_-^gamma,
// the multiset version, and the line + (N-2) Dirichlet rewrite.
SectorIdentityReport verify_sector_identity(const EdgePotential& profile, int n_edges,
                                            double gamma, const GridSpec& grid,
                                            const SolverOptions& opts = {});

struct SplitIdentityReport {
  double gamma = 0.5;
  double trace_neumann = 0.0;
  double trace_dirichlet = 0.0;
  double trace_line = 0.0;
  double residual_rel = 0.0;
  bool passed = false;
};

// Symmetric extension: tr(line, Vtilde) = tr(Neumann, V) + tr(Dirichlet, V).
SplitIdentityReport verify_neumann_dirichlet_split(const EdgePotential& profile, double gamma,
                                                   const GridSpec& grid,
                                                   const SolverOptions& opts = {});

struct SweepPoint {
  double offset = 0.0;
  double ratio = 0.0;
  double rel_gap = 0.0;  // |ratio - line_ratio| / line_ratio
};

struct TranslationSweep {
  double gamma = 0.5;
  int n_edges = 1;
  double line_ratio = 0.0;
  std::vector<SweepPoint> points;
  GridInfo grid;
};

struct SweepOptions {
  double h = 0.01;
  double decay_lengths = 15.0;  // buffer past the farthest support, in 1/kappa_min
  unsigned jobs = 1;
  SolverOptions solver{};
};

// Ratio of the radially transplanted translate V(. - a) against the line
// ratio of the same potential; the gap decays like exp(-2 kappa_min a).
TranslationSweep translation_sweep(const LinePotential& line, int n_edges, double gamma,
                                   const std::vector<double>& offsets,
                                   const SweepOptions& opts = {});

}  // namespace qglt
