#include "qglt/search.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include "qglt/parallel.hpp"
#include "qglt/symmetry.hpp"

namespace qglt {

std::string to_string(Terminated t) {
  switch (t) {
    case Terminated::grad_tol: return "grad_tol";
    case Terminated::max_iters: return "max_iters";
    case Terminated::step_underflow: return "step_underflow";
  }
  return "unknown";
}

namespace {

double effective_width(const SearchConfig& cfg) {
  return cfg.cell_width > 0.0 ? cfg.cell_width : 4.0 * cfg.h;
}

void validate_config(const SearchConfig& cfg) {
  if (cfg.n_edges < 1) throw Error(Errc::invalid_argument, "search needs n_edges >= 1");
  if (cfg.gamma < 0.5)
    throw Error(Errc::gamma_out_of_range, "search ratio needs gamma >= 1/2");
  if (cfg.cells_per_edge < 1)
    throw Error(Errc::invalid_argument, "search needs cells_per_edge >= 1");
  const double w = effective_width(cfg);
  if (!(w > 0.0)) throw Error(Errc::invalid_argument, "cell width must be positive");
  if (cfg.cells_per_edge * w > cfg.edge_length * (1.0 + 1e-12))
    throw Error(Errc::support_exceeds_grid, "cells do not fit on the truncated edge");
  if (cfg.max_iters < 1 || cfg.restarts < 1)
    throw Error(Errc::invalid_argument, "search needs max_iters >= 1 and restarts >= 1");
  if (!(cfg.step_init > 0.0) || !(cfg.step_floor > 0.0) || cfg.grad_tol < 0.0)
    throw Error(Errc::invalid_argument, "step sizes must be positive");
}

GridSpec make_grid(const SearchConfig& cfg) {
  return GridSpec::from_length(cfg.h, cfg.edge_length, cfg.far_bc);
}

size_t cell_dim(const SearchConfig& cfg) {
  auto m = static_cast<size_t>(cfg.cells_per_edge);
  return cfg.symmetrize ? m : m * static_cast<size_t>(cfg.n_edges);
}

EdgePotential cells_to_profile(const double* v, int m, double w) {
  std::vector<Segment> segs(static_cast<size_t>(m));
  for (int c = 0; c < m; ++c)
    segs[static_cast<size_t>(c)] = {w, std::min(v[c], 0.0)};
  return EdgePotential{std::move(segs)};
}

// Overlap lengths of the mesh elements [(i-1)h, ih] with the search cells;
// these are the Hellmann-Feynman weights of the element-mean assembly.
struct CellCover {
  std::vector<std::vector<std::pair<int, double>>> per_element;  // element i-1
};

CellCover make_cover(const GridSpec& grid, int m, double w) {
  CellCover cov;
  const double h = grid.step;
  const auto needed = std::min<long long>(
      grid.points_per_edge, static_cast<long long>(std::ceil(m * w / h)) + 1);
  cov.per_element.resize(static_cast<size_t>(std::max<long long>(needed, 0)));
  for (size_t ei = 0; ei < cov.per_element.size(); ++ei) {
    const double a = static_cast<double>(ei) * h;
    const double b = a + h;
    int c0 = std::max(0, static_cast<int>(std::floor(a / w)));
    int c1 = std::min(m - 1, static_cast<int>(std::floor(b / w)));
    for (int c = c0; c <= c1; ++c) {
      double ov = std::min(b, (c + 1) * w) - std::max(a, c * w);
      if (ov > 1e-15 * h) cov.per_element[ei].emplace_back(c, ov);
    }
  }
  return cov;
}

// psi^T (dA/dv_c) psi summed into g, scaled by coef: element i touches node
// i-1 (the vertex when i = 1; worth 0 under a Dirichlet vertex) and node i,
// each with half its overlap length.
void add_eigpair_weights(const EdgeFunction& psi, const CellCover& cov, double coef, int m,
                         bool per_edge_cells, std::vector<double>& g) {
  const double vv = psi.vertex_value.value_or(0.0);
  for (size_t e = 0; e < psi.edges.size(); ++e) {
    const auto& chain = psi.edges[e];
    const size_t len = chain.size();
    const size_t base = per_edge_cells ? e * static_cast<size_t>(m) : 0;
    for (size_t ei = 0; ei < cov.per_element.size(); ++ei) {
      const size_t i = ei + 1;
      if (cov.per_element[ei].empty()) continue;
      double nodes_sq = 0.0;
      if (i == 1)
        nodes_sq += vv * vv;
      else if (i - 2 < len)
        nodes_sq += chain[i - 2] * chain[i - 2];
      if (i - 1 < len) nodes_sq += chain[i - 1] * chain[i - 1];
      if (nodes_sq == 0.0) continue;
      for (auto [c, ov] : cov.per_element[ei])
        g[base + static_cast<size_t>(c)] += coef * 0.5 * ov * nodes_sq;
    }
  }
}

}  // namespace

PotentialField cells_to_field(const SearchConfig& cfg, const std::vector<double>& cells) {
  validate_config(cfg);
  if (cells.size() != cell_dim(cfg))
    throw Error(Errc::invalid_argument, "cell vector length does not match the config");
  const int m = cfg.cells_per_edge;
  const double w = effective_width(cfg);
  if (cfg.symmetrize)
    return radial_field(StarGraph{cfg.n_edges}, cells_to_profile(cells.data(), m, w));
  std::vector<EdgePotential> edges;
  edges.reserve(static_cast<size_t>(cfg.n_edges));
  for (int e = 0; e < cfg.n_edges; ++e)
    edges.push_back(cells_to_profile(cells.data() + static_cast<size_t>(e) * m, m, w));
  return PotentialField{StarGraph{cfg.n_edges}, std::move(edges)};
}

RatioEval ratio_gradient(const SearchConfig& cfg, const std::vector<double>& cells) {
  validate_config(cfg);
  const size_t dim = cell_dim(cfg);
  if (cells.size() != dim)
    throw Error(Errc::invalid_argument, "cell vector length does not match the config");

  std::vector<double> v(cells);
  for (auto& x : v) x = std::min(x, 0.0);

  const int m = cfg.cells_per_edge;
  const double w = effective_width(cfg);
  const GridSpec grid = make_grid(cfg);
  const PotentialField field = cells_to_field(cfg, v);
  const double norm = potential_norm(field, cfg.gamma);
  if (norm <= 0.0)
    throw Error(Errc::zero_norm, "all cells vanish; ratio undefined");

  const CellCover cov = make_cover(grid, m, w);
  RatioEval out;
  out.gradient.assign(dim, 0.0);
  std::vector<double> gt(dim, 0.0);  // sum_k gamma |E_k|^(gamma-1) psi_k^T dA psi_k
  double trace = 0.0;

  auto process = [&](const DiscreteOperator& op, int mult, bool per_edge) {
    Spectrum spec = negative_spectrum(op, cfg.solver);
    if (!cfg.symmetrize) {
      for (size_t k = 1; k < spec.eigenvalues.size(); ++k)
        if (spec.eigenvalues[k] - spec.eigenvalues[k - 1] < 10.0 * cfg.solver.tol_eig)
          throw Error(Errc::degenerate_spectrum,
                      "eigenvalue gap below 10*tol_eig; use symmetrize or perturb");
    }
    out.n_states += mult * spec.count();
    for (double e : spec.eigenvalues) {
      trace += mult * std::pow(-e, cfg.gamma);
      EdgeFunction psi = eigenvector(op, e, cfg.solver);
      double coef = mult * cfg.gamma * std::pow(-e, cfg.gamma - 1.0);
      add_eigpair_weights(psi, cov, coef, m, per_edge, gt);
    }
  };

  if (cfg.symmetrize) {
    SectorDecomposition dec = decompose_radial(field.edge(0), cfg.n_edges, grid);
    process(dec.neumann, 1, false);
    if (dec.dirichlet_multiplicity > 0)
      process(dec.dirichlet, dec.dirichlet_multiplicity, false);
  } else {
    process(assemble_star(field, grid), 1, true);
  }

  out.ratio = trace / norm;
  const double edge_mult = cfg.symmetrize ? static_cast<double>(cfg.n_edges) : 1.0;
  for (size_t c = 0; c < dim; ++c) {
    double dnorm = -(cfg.gamma + 0.5) * std::pow(-v[c], cfg.gamma - 0.5) * w * edge_mult;
    out.gradient[c] = (-gt[c] - out.ratio * dnorm) / norm;
  }
  return out;
}

namespace {

struct RestartOutcome {
  double best_ratio = 0.0;
  std::vector<double> best_cells;
  std::vector<TracePoint> trace;
  Terminated terminated_by = Terminated::max_iters;
  int degenerate_count = 0;
};

RestartOutcome run_restart(const SearchConfig& cfg, int restart) {
  const size_t dim = cell_dim(cfg);
  const int m = cfg.cells_per_edge;
  std::mt19937_64 rng(cfg.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(restart) + 1);

  std::vector<double> v(dim, 0.0);
  if (restart % 2 == 0) {
    // localized bump: single well of random position, width and depth
    std::uniform_int_distribution<int> cpos(0, m - 1);
    std::uniform_int_distribution<int> chw(0, std::min(4, m - 1));
    std::uniform_real_distribution<double> cdepth(0.5, 4.0);
    int n_profiles = cfg.symmetrize ? 1 : cfg.n_edges;
    std::uniform_int_distribution<int> cedge(0, n_profiles - 1);
    int edge = cedge(rng);
    int center = cpos(rng);
    int halfw = chw(rng);
    double depth = cdepth(rng);
    for (int c = std::max(0, center - halfw); c <= std::min(m - 1, center + halfw); ++c)
      v[static_cast<size_t>(edge) * m + static_cast<size_t>(c)] = -depth;
  } else {
    std::uniform_real_distribution<double> cval(-2.0, 0.0);
    for (auto& x : v) x = cval(rng);
  }
  if (std::all_of(v.begin(), v.end(), [](double x) { return x > -1e-12; })) v[0] = -1.0;

  RestartOutcome outcome;
  auto try_eval = [&](const std::vector<double>& cells) -> std::optional<RatioEval> {
    try {
      return ratio_gradient(cfg, cells);
    } catch (const Error& err) {
      if (err.code() == Errc::degenerate_spectrum) {
        ++outcome.degenerate_count;
        return std::nullopt;
      }
      // A step that clamps every cell to zero has no ratio; reject it like
      // any other failed candidate instead of aborting the restart.
      if (err.code() == Errc::zero_norm) return std::nullopt;
      throw;
    }
  };

  auto note_best = [&](double ratio, const std::vector<double>& cells, int iter) {
    outcome.trace.push_back({iter, ratio});
    if (ratio > outcome.best_ratio || outcome.best_cells.empty()) {
      outcome.best_ratio = ratio;
      outcome.best_cells = cells;
    }
  };

  std::optional<RatioEval> cur = try_eval(v);
  if (cur) note_best(cur->ratio, v, 0);

  double step = cfg.step_init;
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  outcome.terminated_by = Terminated::max_iters;

  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    if (!cur) {
      // degenerate point: sidestep with a small random kick and carry on
      for (auto& x : v) x = std::min(x + cfg.step_init / 100.0 * jitter(rng), 0.0);
      cur = try_eval(v);
      if (cur) note_best(cur->ratio, v, iter);
      continue;
    }

    std::vector<double> dir = cur->gradient;
    double pg_norm2 = 0.0;
    for (size_t c = 0; c < dim; ++c) {
      if (v[c] >= -1e-300 && dir[c] > 0.0) dir[c] = 0.0;  // ascent would leave V <= 0
      pg_norm2 += dir[c] * dir[c];
    }
    if (std::sqrt(pg_norm2) <= cfg.grad_tol) {
      outcome.terminated_by = Terminated::grad_tol;
      break;
    }

    bool accepted = false;
    while (step >= cfg.step_floor) {
      std::vector<double> cand(dim);
      for (size_t c = 0; c < dim; ++c) cand[c] = std::min(v[c] + step * dir[c], 0.0);
      std::optional<RatioEval> cand_eval = try_eval(cand);
      if (cand_eval && cand_eval->ratio > cur->ratio * (1.0 + 1e-14)) {
        v = std::move(cand);
        cur = std::move(cand_eval);
        note_best(cur->ratio, v, iter);
        step = std::min(step * 2.0, 1e4);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      outcome.terminated_by = Terminated::step_underflow;
      break;
    }
  }
  return outcome;
}

}  // namespace

SearchResult maximize_ratio(const SearchConfig& cfg, unsigned jobs) {
  validate_config(cfg);
  std::vector<RestartOutcome> outcomes(static_cast<size_t>(cfg.restarts));
  parallel_for(outcomes.size(), jobs,
               [&](size_t r) { outcomes[r] = run_restart(cfg, static_cast<int>(r)); });

  SearchResult result;
  size_t best = 0;
  for (size_t r = 0; r < outcomes.size(); ++r) {
    result.degenerate_warnings += outcomes[r].degenerate_count;
    result.max_iterate_ratio = std::max(result.max_iterate_ratio, outcomes[r].best_ratio);
    if (outcomes[r].best_ratio > outcomes[best].best_ratio) best = r;
  }
  RestartOutcome& top = outcomes[best];
  if (top.best_cells.empty())
    throw Error(Errc::degenerate_spectrum,
                "every restart stayed degenerate; no iterate was evaluated");
  result.best_ratio = top.best_ratio;
  result.best_cells = top.best_cells;
  result.best_field = cells_to_field(cfg, top.best_cells);
  result.iterate_trace = std::move(top.trace);
  result.terminated_by = top.terminated_by;
  result.best_restart = static_cast<int>(best);
  return result;
}

}  // namespace qglt
