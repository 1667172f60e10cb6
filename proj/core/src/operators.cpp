#include "qglt/operators.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qglt {

namespace {

struct PotentialStats {
  double min = 0.0;
  double max_abs = 0.0;
  void feed(double v) {
    min = std::min(min, v);
    max_abs = std::max(max_abs, std::abs(v));
  }
};

void check_support(const EdgePotential& p, const GridSpec& grid) {
  double L = grid.edge_length();
  if (p.support_length() > L * (1.0 + 1e-12) + 1e-12)
    throw Error(Errc::support_exceeds_grid, "potential support extends past the grid length");
}

// Chain for nodes 1..M of one edge; the element [0, h] contributes its half
// weight to node 1 whether node 0 is a vertex, a Neumann boundary node, or an
// eliminated Dirichlet value - in all cases node 1 keeps kinetic 2/h.
EdgeChain build_chain(const EdgePotential& p, const GridSpec& grid, double coupling,
                      PotentialStats& stats) {
  const double h = grid.step;
  const int n = grid.points_per_edge;
  const int m = grid.far_bc == FarBc::neumann ? n : n - 1;

  EdgeChain chain;
  chain.off = -1.0 / h;
  chain.coupling = coupling;
  chain.diag.resize(static_cast<size_t>(m));
  chain.mass.resize(static_cast<size_t>(m));

  // element means V_e over [ (i-1)h, ih ], i = 1..n
  std::vector<double> vbar(static_cast<size_t>(n));
  for (int i = 1; i <= n; ++i) {
    vbar[static_cast<size_t>(i - 1)] = p.mean_over((i - 1) * h, i * h);
    stats.feed(vbar[static_cast<size_t>(i - 1)]);
  }

  for (int i = 1; i <= m; ++i) {
    bool far_neumann_node = (grid.far_bc == FarBc::neumann && i == n);
    double kin = far_neumann_node ? 1.0 / h : 2.0 / h;
    double mass = far_neumann_node ? h / 2.0 : h;
    double pot = (h / 2.0) * vbar[static_cast<size_t>(i - 1)];
    if (!far_neumann_node) pot += (h / 2.0) * vbar[static_cast<size_t>(i)];
    chain.diag[static_cast<size_t>(i - 1)] = kin + pot;
    chain.mass[static_cast<size_t>(i - 1)] = mass;
  }
  return chain;
}

// vertex stiffness/mass for a bundle of edges glued at x = 0
VertexBlock build_vertex(const std::vector<const EdgePotential*>& edges, const GridSpec& grid,
                         PotentialStats& stats) {
  const double h = grid.step;
  VertexBlock v;
  v.diag = static_cast<double>(edges.size()) / h;
  v.mass = static_cast<double>(edges.size()) * h / 2.0;
  for (const auto* p : edges) {
    double vbar = p->mean_over(0.0, h);
    stats.feed(vbar);
    v.diag += (h / 2.0) * vbar;
  }
  return v;
}

}  // namespace

DiscreteOperator DiscreteOperator::make(OpStructure s, GridSpec grid,
                                        std::optional<VertexBlock> v,
                                        std::vector<EdgeChain> chains, double min_potential,
                                        double max_abs_potential) {
  DiscreteOperator op;
  op.structure_ = s;
  op.grid_ = grid;
  op.vertex_ = v;
  op.chains_ = std::move(chains);
  op.min_potential_ = min_potential;
  op.max_abs_potential_ = max_abs_potential;
  return op;
}

DiscreteOperator DiscreteOperator::direct_sum(std::vector<DiscreteOperator> parts) {
  if (parts.empty()) throw Error(Errc::invalid_argument, "direct sum of nothing");
  DiscreteOperator op;
  op.structure_ = OpStructure::direct_sum;
  op.grid_ = parts.front().grid();
  op.min_potential_ = 0.0;
  op.max_abs_potential_ = 0.0;
  for (const auto& p : parts) {
    op.min_potential_ = std::min(op.min_potential_, p.min_potential());
    op.max_abs_potential_ = std::max(op.max_abs_potential_, p.max_abs_potential());
  }
  op.parts_ = std::move(parts);
  return op;
}

int DiscreteOperator::n_unknowns() const {
  if (structure_ == OpStructure::direct_sum) {
    int total = 0;
    for (const auto& p : parts_) total += p.n_unknowns();
    return total;
  }
  int total = vertex_ ? 1 : 0;
  for (const auto& c : chains_) total += static_cast<int>(c.diag.size());
  return total;
}

DiscreteOperator assemble_star(const PotentialField& field, const GridSpec& grid) {
  for (const auto& e : field.per_edge) check_support(e, grid);
  PotentialStats stats;
  std::vector<const EdgePotential*> at_vertex;
  for (const auto& e : field.per_edge) at_vertex.push_back(&e);
  VertexBlock v = build_vertex(at_vertex, grid, stats);
  std::vector<EdgeChain> chains;
  chains.reserve(field.per_edge.size());
  for (const auto& e : field.per_edge) chains.push_back(build_chain(e, grid, -1.0 / grid.step, stats));
  OpStructure s = field.graph.n_edges == 1 ? OpStructure::half_line : OpStructure::star;
  return DiscreteOperator::make(s, grid, v, std::move(chains), stats.min, stats.max_abs);
}

DiscreteOperator assemble_half_line(const EdgePotential& profile, const GridSpec& grid,
                                    VertexBc bc) {
  check_support(profile, grid);
  PotentialStats stats;
  if (bc == VertexBc::dirichlet) {
    std::vector<EdgeChain> chains{build_chain(profile, grid, 0.0, stats)};
    return DiscreteOperator::make(OpStructure::half_line, grid, std::nullopt, std::move(chains),
                                  stats.min, stats.max_abs);
  }
  // kirchhoff on one edge == neumann
  VertexBlock v = build_vertex({&profile}, grid, stats);
  std::vector<EdgeChain> chains{build_chain(profile, grid, -1.0 / grid.step, stats)};
  return DiscreteOperator::make(OpStructure::half_line, grid, v, std::move(chains), stats.min,
                                stats.max_abs);
}

DiscreteOperator assemble_line(const LinePotential& potential, const GridSpec& grid) {
  check_support(potential.neg, grid);
  check_support(potential.pos, grid);
  PotentialStats stats;
  VertexBlock center = build_vertex({&potential.neg, &potential.pos}, grid, stats);
  std::vector<EdgeChain> chains;
  chains.push_back(build_chain(potential.neg, grid, -1.0 / grid.step, stats));
  chains.push_back(build_chain(potential.pos, grid, -1.0 / grid.step, stats));
  return DiscreteOperator::make(OpStructure::line, grid, center, std::move(chains), stats.min,
                                stats.max_abs);
}

std::vector<DiscreteOperator> assemble_cut_even(const PotentialField& field,
                                                const GridSpec& grid) {
  const int N = field.graph.n_edges;
  if (N % 2 != 0)
    throw Error(Errc::odd_edge_count, "even cut needs an even number of edges");
  const int half = N / 2;
  std::vector<DiscreteOperator> lines;
  lines.reserve(static_cast<size_t>(half));
  for (int i = 0; i < half; ++i) {
    LinePotential lp{field.per_edge[static_cast<size_t>(half + i)],
                     field.per_edge[static_cast<size_t>(i)]};
    lines.push_back(assemble_line(lp, grid));
  }
  return lines;
}

std::vector<DiscreteOperator> assemble_cut_split(const PotentialField& field,
                                                 const GridSpec& grid,
                                                 const std::vector<int>& group) {
  const int N = field.graph.n_edges;
  std::set<int> s(group.begin(), group.end());
  if (s.empty() || static_cast<int>(s.size()) >= N)
    throw Error(Errc::empty_split, "split group must be a proper nonempty edge subset");
  for (int i : s)
    if (i < 1 || i > N) throw Error(Errc::invalid_argument, "split edge id out of range");

  auto sub_field = [&](bool inside) {
    std::vector<EdgePotential> edges;
    for (int i = 1; i <= N; ++i)
      if (s.count(i) == static_cast<size_t>(inside ? 1 : 0))
        edges.push_back(field.per_edge[static_cast<size_t>(i - 1)]);
    const StarGraph sub{static_cast<int>(edges.size())};
    return PotentialField(sub, std::move(edges));
  };

  std::vector<DiscreteOperator> parts;
  parts.push_back(assemble_star(sub_field(true), grid));
  parts.push_back(assemble_star(sub_field(false), grid));
  return parts;
}

}  // namespace qglt
