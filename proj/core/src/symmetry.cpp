#include "qglt/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qglt/parallel.hpp"

namespace qglt {

StarFunction project_sector(const StarFunction& psi, int ell) {
  const int n = static_cast<int>(psi.edges.size());
  if (n < 1) throw Error(Errc::invalid_argument, "projection needs at least one edge");
  if (ell < 0 || ell >= n)
    throw Error(Errc::invalid_argument, "sector index must lie in [0, n_edges)");

  std::vector<std::complex<double>> omega(static_cast<size_t>(n));
  for (int t = 0; t < n; ++t)
    omega[static_cast<size_t>(t)] = std::polar(1.0, 2.0 * M_PI * ell * t / n);

  StarFunction out;
  out.vertex = ell == 0 ? psi.vertex : std::complex<double>{0.0, 0.0};
  out.edges.assign(psi.edges.size(), {});
  for (int k = 0; k < n; ++k) {
    auto& dst = out.edges[static_cast<size_t>(k)];
    dst.assign(psi.edges[static_cast<size_t>(k)].size(), {0.0, 0.0});
    for (int j = 0; j < n; ++j) {
      const auto& src = psi.edges[static_cast<size_t>(j)];
      if (src.size() != dst.size())
        throw Error(Errc::invalid_argument, "edge functions must share one chain length");
      std::complex<double> w = omega[static_cast<size_t>(((k - j) % n + n) % n)];
      for (size_t i = 0; i < dst.size(); ++i) dst[i] += w * src[i];
    }
    for (auto& v : dst) v /= static_cast<double>(n);
  }
  return out;
}

namespace {

void require_star_shape(const DiscreteOperator& op, const StarFunction& psi) {
  if (!op.has_vertex() || op.chains().size() != psi.edges.size())
    throw Error(Errc::invalid_argument, "function shape does not match the operator");
  for (size_t j = 0; j < psi.edges.size(); ++j)
    if (psi.edges[j].size() != op.chains()[j].diag.size())
      throw Error(Errc::invalid_argument, "function shape does not match the operator");
}

}  // namespace

StarFunction apply_stiffness(const DiscreteOperator& op, const StarFunction& psi) {
  require_star_shape(op, psi);
  StarFunction out;
  out.edges.assign(psi.edges.size(), {});
  out.vertex = op.vertex().diag * psi.vertex;
  for (size_t j = 0; j < psi.edges.size(); ++j) {
    const EdgeChain& c = op.chains()[j];
    const auto& x = psi.edges[j];
    auto& y = out.edges[j];
    y.assign(x.size(), {0.0, 0.0});
    const size_t m = x.size();
    for (size_t i = 0; i < m; ++i) {
      y[i] = c.diag[i] * x[i];
      if (i > 0) y[i] += c.off * x[i - 1];
      if (i + 1 < m) y[i] += c.off * x[i + 1];
    }
    if (m > 0) {
      out.vertex += c.coupling * x[0];
      y[0] += c.coupling * psi.vertex;
    }
  }
  return out;
}

StarFunction apply_mass(const DiscreteOperator& op, const StarFunction& psi) {
  require_star_shape(op, psi);
  StarFunction out;
  out.vertex = op.vertex().mass * psi.vertex;
  out.edges.assign(psi.edges.size(), {});
  for (size_t j = 0; j < psi.edges.size(); ++j) {
    const EdgeChain& c = op.chains()[j];
    const auto& x = psi.edges[j];
    auto& y = out.edges[j];
    y.assign(x.size(), {0.0, 0.0});
    for (size_t i = 0; i < x.size(); ++i) y[i] = c.mass[i] * x[i];
  }
  return out;
}

SectorDecomposition decompose_radial(const EdgePotential& profile, int n_edges,
                                     const GridSpec& grid) {
  if (n_edges < 1) throw Error(Errc::invalid_argument, "need at least one edge");
  return SectorDecomposition{
      assemble_half_line(profile, grid, VertexBc::neumann),
      assemble_half_line(profile, grid, VertexBc::dirichlet),
      n_edges - 1,
  };
}

SectorIdentityReport verify_sector_identity(const EdgePotential& profile, int n_edges,
                                            double gamma, const GridSpec& grid,
                                            const SolverOptions& opts) {
  SectorIdentityReport rep;
  rep.n_edges = n_edges;
  rep.gamma = gamma;

  Spectrum star =
      negative_spectrum(assemble_star(radial_field(StarGraph{n_edges}, profile), grid), opts);
  SectorDecomposition dec = decompose_radial(profile, n_edges, grid);
  Spectrum neu = negative_spectrum(dec.neumann, opts);
  Spectrum dir = negative_spectrum(dec.dirichlet, opts);

  rep.trace_star = riesz_mean(star, gamma);
  rep.trace_sectors = riesz_mean(neu, gamma) + dec.dirichlet_multiplicity * riesz_mean(dir, gamma);
  rep.residual = std::abs(rep.trace_star - rep.trace_sectors);
  rep.tolerance = 1e-8 * (1.0 + std::abs(rep.trace_star));

  std::vector<double> merged = neu.eigenvalues;
  for (int r = 0; r < dec.dirichlet_multiplicity; ++r)
    merged.insert(merged.end(), dir.eigenvalues.begin(), dir.eigenvalues.end());
  std::sort(merged.begin(), merged.end());
  rep.count_star = star.count();
  rep.count_sectors = static_cast<int>(merged.size());
  if (rep.count_star == rep.count_sectors) {
    for (size_t k = 0; k < merged.size(); ++k)
      rep.multiset_max_diff =
          std::max(rep.multiset_max_diff, std::abs(star.eigenvalues[k] - merged[k]));
  } else {
    rep.multiset_max_diff = std::numeric_limits<double>::infinity();
  }

  // same content, written through the doubled line: star = line + (N-2) Dirichlet
  Spectrum line = negative_spectrum(assemble_line(symmetric_extension(profile), grid), opts);
  double trace_key = riesz_mean(line, gamma) + (n_edges - 2) * riesz_mean(dir, gamma);
  rep.key_identity_residual = std::abs(rep.trace_star - trace_key);

  rep.passed = rep.residual <= rep.tolerance && rep.count_star == rep.count_sectors &&
               rep.multiset_max_diff <= rep.tolerance &&
               rep.key_identity_residual <= rep.tolerance;
  return rep;
}

SplitIdentityReport verify_neumann_dirichlet_split(const EdgePotential& profile, double gamma,
                                                   const GridSpec& grid,
                                                   const SolverOptions& opts) {
  SplitIdentityReport rep;
  rep.gamma = gamma;
  Spectrum neu = negative_spectrum(assemble_half_line(profile, grid, VertexBc::neumann), opts);
  Spectrum dir = negative_spectrum(assemble_half_line(profile, grid, VertexBc::dirichlet), opts);
  Spectrum line = negative_spectrum(assemble_line(symmetric_extension(profile), grid), opts);
  rep.trace_neumann = riesz_mean(neu, gamma);
  rep.trace_dirichlet = riesz_mean(dir, gamma);
  rep.trace_line = riesz_mean(line, gamma);
  double diff = std::abs(rep.trace_neumann + rep.trace_dirichlet - rep.trace_line);
  rep.residual_rel = diff / (1.0 + std::abs(rep.trace_line));
  rep.passed = rep.residual_rel <= 1e-8;
  return rep;
}

TranslationSweep translation_sweep(const LinePotential& line, int n_edges, double gamma,
                                   const std::vector<double>& offsets,
                                   const SweepOptions& opts) {
  if (n_edges < 1) throw Error(Errc::invalid_argument, "need at least one edge");
  if (offsets.empty()) throw Error(Errc::invalid_argument, "sweep needs at least one offset");
  const double neg_extent = line.neg.support_length();
  const double pos_extent = line.pos.support_length();
  for (double a : offsets)
    if (!(a >= neg_extent))
      throw Error(Errc::offset_too_small, "every offset must cover the left support extent");

  // provisional line solve fixes the decay rate, hence the truncation length
  double kappa_min = 1.0;
  {
    GridSpec probe = GridSpec::from_length(
        opts.h, neg_extent + pos_extent + 30.0, FarBc::dirichlet);
    Spectrum s = negative_spectrum(assemble_line(line, probe), opts.solver);
    if (!s.empty()) kappa_min = std::sqrt(-s.eigenvalues.back());
    if (!(kappa_min > 1e-3)) kappa_min = 1e-3;
  }
  const double buffer = opts.decay_lengths / kappa_min;

  TranslationSweep sweep;
  sweep.gamma = gamma;
  sweep.n_edges = n_edges;

  const double max_offset = *std::max_element(offsets.begin(), offsets.end());
  GridSpec star_grid =
      GridSpec::from_length(opts.h, max_offset + pos_extent + buffer, FarBc::dirichlet);
  sweep.grid = {star_grid.step, star_grid.edge_length()};

  {
    GridSpec line_grid = GridSpec::from_length(
        opts.h, std::max(neg_extent, pos_extent) + buffer, FarBc::dirichlet);
    Spectrum s = negative_spectrum(assemble_line(line, line_grid), opts.solver);
    double norm = potential_norm(line, gamma);
    if (norm <= 0.0)
      throw Error(Errc::zero_norm, "potential has no negative part; ratio undefined");
    sweep.line_ratio = riesz_mean(s, gamma) / norm;
  }

  sweep.points.assign(offsets.size(), {});
  parallel_for(offsets.size(), opts.jobs, [&](size_t i) {
    PotentialField field = transplant(line, StarGraph{n_edges}, 1, offsets[i], /*radial=*/true);
    double ratio = lt_ratio(field, gamma, star_grid, opts.solver);
    SweepPoint p;
    p.offset = offsets[i];
    p.ratio = ratio;
    p.rel_gap = sweep.line_ratio > 0.0 ? std::abs(ratio - sweep.line_ratio) / sweep.line_ratio
                                       : std::abs(ratio);
    sweep.points[i] = p;
  });
  return sweep;
}

}  // namespace qglt
