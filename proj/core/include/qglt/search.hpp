#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qglt/lieb_thirring.hpp"
#include "qglt/potential.hpp"

namespace qglt {

// Maximizes the Lieb-Thirring ratio R(V) = tr H_-^gamma / int V_-^(gamma+1/2)
// over piecewise-constant cell potentials V <= 0 by projected gradient ascent
// with backtracking; eigenvalue derivatives via Hellmann-Feynman.
struct SearchConfig {
  int n_edges = 2;
  double gamma = 0.5;
  int cells_per_edge = 100;
  double cell_width = 0.0;  // 0 = default 4h
  double h = 0.01;
  double edge_length = 30.0;
  FarBc far_bc = FarBc::dirichlet;

  int max_iters = 120;
  int restarts = 3;
  double step_init = 0.5;
  double grad_tol = 1e-7;     // projected-gradient norm
  double step_floor = 1e-12;  // StepUnderflow below this
  std::uint64_t seed = 0;
  bool symmetrize = false;    // search radial fields via the half-line sectors

  SolverOptions solver{.tol_eig = 1e-11, .tol_zero = 1e-11};
};

enum class Terminated { grad_tol, max_iters, step_underflow };

std::string to_string(Terminated t);

struct TracePoint {
  int iteration = 0;
  double ratio = 0.0;
};

struct SearchResult {
  double best_ratio = 0.0;
  PotentialField best_field;               // cells materialized as segments
  std::vector<double> best_cells;          // flat cell values (per edge major)
  std::vector<TracePoint> iterate_trace;   // accepted iterates, best restart
  Terminated terminated_by = Terminated::max_iters;
  int degenerate_warnings = 0;
  int best_restart = 0;
  double max_iterate_ratio = 0.0;          // largest ratio ever accepted
};

// Gradient of R at the given cell values (nonpositive).  Throws
// Errc::degenerate_spectrum when an eigenvalue gap is below 10 * tol_eig and
// symmetrize is false; no bound states gives the zero gradient.
struct RatioEval {
  double ratio = 0.0;
  std::vector<double> gradient;
  int n_states = 0;
};

RatioEval ratio_gradient(const SearchConfig& cfg, const std::vector<double>& cells);

SearchResult maximize_ratio(const SearchConfig& cfg, unsigned jobs = 1);

// Cells -> potential field (segments of width cell_width, clamped to <= 0).
PotentialField cells_to_field(const SearchConfig& cfg, const std::vector<double>& cells);

}  // namespace qglt
