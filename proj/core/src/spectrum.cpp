#include "qglt/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace qglt {

namespace {

// Pivot magnitudes comparable to the largest shifted diagonal entry.
double pivot_scale(const DiscreteOperator& op, double shift) {
  double s = 1.0;
  if (op.structure() == OpStructure::direct_sum) {
    for (const auto& p : op.parts()) s = std::max(s, pivot_scale(p, shift));
    return s;
  }
  if (op.has_vertex())
    s = std::max(s, std::abs(op.vertex().diag) + std::abs(shift) * op.vertex().mass);
  for (const auto& c : op.chains())
    for (size_t i = 0; i < c.diag.size(); ++i)
      s = std::max(s, std::abs(c.diag[i]) + std::abs(shift) * c.mass[i]);
  return s;
}

// Sylvester inertia of A - shift*M: eliminate each chain from the far end
// toward the vertex (fill stays on the vertex row), vertex pivot last.
int inertia_once(const DiscreteOperator& op, double shift) {
  if (op.structure() == OpStructure::direct_sum) {
    int total = 0;
    for (const auto& p : op.parts()) total += inertia_once(p, shift);
    return total;
  }
  const double breakdown = 1e-14 * pivot_scale(op, shift);
  int neg = 0;
  double vertex_acc = op.has_vertex() ? op.vertex().diag - shift * op.vertex().mass : 0.0;
  for (const auto& c : op.chains()) {
    const size_t m = c.diag.size();
    const double off2 = c.off * c.off;
    double delta = 0.0;
    for (size_t r = m; r-- > 0;) {
      double p = c.diag[r] - shift * c.mass[r];
      if (r + 1 < m) p -= off2 / delta;
      if (std::abs(p) < breakdown)
        throw Error(Errc::pivot_breakdown, "pivot within 1e-14 of zero during inertia");
      if (p < 0.0) ++neg;
      delta = p;
    }
    if (op.has_vertex() && c.coupling != 0.0 && m > 0)
      vertex_acc -= (c.coupling * c.coupling) / delta;
  }
  if (op.has_vertex()) {
    if (std::abs(vertex_acc) < breakdown)
      throw Error(Errc::pivot_breakdown, "vertex pivot within 1e-14 of zero during inertia");
    if (vertex_acc < 0.0) ++neg;
  }
  return neg;
}

int inertia_guarded(const DiscreteOperator& op, double shift, int max_retries) {
  double e = shift;
  for (int attempt = 0;; ++attempt) {
    try {
      return inertia_once(op, e);
    } catch (const Error& err) {
      if (err.code() != Errc::pivot_breakdown || attempt >= max_retries) throw;
      e += 1e-10 * std::max(1.0, std::abs(shift));
    }
  }
}

// ---- flat-vector plumbing for eigenvectors ---------------------------------

size_t flat_size(const DiscreteOperator& op) { return static_cast<size_t>(op.n_unknowns()); }

// layout: [vertex?][chain 0 nodes 1..M][chain 1 ...]
void apply_stiffness_flat(const DiscreteOperator& op, const std::vector<double>& x,
                          std::vector<double>& y) {
  y.assign(x.size(), 0.0);
  size_t base = op.has_vertex() ? 1 : 0;
  if (op.has_vertex()) y[0] = op.vertex().diag * x[0];
  for (const auto& c : op.chains()) {
    const size_t m = c.diag.size();
    for (size_t i = 0; i < m; ++i) {
      double acc = c.diag[i] * x[base + i];
      if (i > 0) acc += c.off * x[base + i - 1];
      if (i + 1 < m) acc += c.off * x[base + i + 1];
      y[base + i] = acc;
    }
    if (op.has_vertex() && c.coupling != 0.0 && m > 0) {
      y[0] += c.coupling * x[base];
      y[base] += c.coupling * x[0];
    }
    base += m;
  }
}

void apply_mass_flat(const DiscreteOperator& op, const std::vector<double>& x,
                     std::vector<double>& y) {
  y.assign(x.size(), 0.0);
  size_t base = op.has_vertex() ? 1 : 0;
  if (op.has_vertex()) y[0] = op.vertex().mass * x[0];
  for (const auto& c : op.chains()) {
    for (size_t i = 0; i < c.mass.size(); ++i) y[base + i] = c.mass[i] * x[base + i];
    base += c.mass.size();
  }
}

// LDL^T of A - sigma*M in chain-then-vertex elimination order, with tiny
// pivots floored (inverse iteration wants near-singular solves, not throws).
struct ShiftedFactor {
  std::vector<std::vector<double>> chain_pivots;
  double vertex_pivot = 1.0;
  double floor = 0.0;
};

ShiftedFactor factor_shifted(const DiscreteOperator& op, double sigma) {
  ShiftedFactor f;
  f.floor = std::numeric_limits<double>::epsilon() * pivot_scale(op, sigma);
  double vertex_acc = op.has_vertex() ? op.vertex().diag - sigma * op.vertex().mass : 1.0;
  f.chain_pivots.reserve(op.chains().size());
  for (const auto& c : op.chains()) {
    const size_t m = c.diag.size();
    const double off2 = c.off * c.off;
    std::vector<double> d(m);
    for (size_t r = m; r-- > 0;) {
      double p = c.diag[r] - sigma * c.mass[r];
      if (r + 1 < m) p -= off2 / d[r + 1];
      if (std::abs(p) < f.floor) p = std::copysign(f.floor, p == 0.0 ? 1.0 : p);
      d[r] = p;
    }
    if (op.has_vertex() && c.coupling != 0.0 && m > 0)
      vertex_acc -= (c.coupling * c.coupling) / d[0];
    f.chain_pivots.push_back(std::move(d));
  }
  if (op.has_vertex()) {
    if (std::abs(vertex_acc) < f.floor)
      vertex_acc = std::copysign(f.floor, vertex_acc == 0.0 ? 1.0 : vertex_acc);
    f.vertex_pivot = vertex_acc;
  }
  return f;
}

void solve_shifted(const DiscreteOperator& op, const ShiftedFactor& f, std::vector<double> b,
                   std::vector<double>& x) {
  const size_t base0 = op.has_vertex() ? 1 : 0;
  // forward: eliminate chains toward node 1, then into the vertex
  size_t base = base0;
  for (size_t ci = 0; ci < op.chains().size(); ++ci) {
    const auto& c = op.chains()[ci];
    const auto& d = f.chain_pivots[ci];
    const size_t m = d.size();
    for (size_t i = m - 1; i-- > 0;) b[base + i] -= (c.off / d[i + 1]) * b[base + i + 1];
    if (op.has_vertex() && c.coupling != 0.0 && m > 0)
      b[0] -= (c.coupling / d[0]) * b[base];
    base += m;
  }
  // diagonal
  x.assign(b.size(), 0.0);
  if (op.has_vertex()) x[0] = b[0] / f.vertex_pivot;
  base = base0;
  for (size_t ci = 0; ci < op.chains().size(); ++ci) {
    const auto& d = f.chain_pivots[ci];
    for (size_t i = 0; i < d.size(); ++i) x[base + i] = b[base + i] / d[i];
    base += d.size();
  }
  // backward
  base = base0;
  for (size_t ci = 0; ci < op.chains().size(); ++ci) {
    const auto& c = op.chains()[ci];
    const auto& d = f.chain_pivots[ci];
    const size_t m = d.size();
    if (op.has_vertex() && c.coupling != 0.0 && m > 0)
      x[base] -= (c.coupling / d[0]) * x[0];
    for (size_t i = 1; i < m; ++i) x[base + i] -= (c.off / d[i]) * x[base + i - 1];
    base += m;
  }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double mass_dot(const DiscreteOperator& op, const std::vector<double>& a,
                const std::vector<double>& b) {
  std::vector<double> mb;
  apply_mass_flat(op, b, mb);
  return dot(a, mb);
}

EdgeFunction to_edge_function(const DiscreteOperator& op, const std::vector<double>& x) {
  EdgeFunction f;
  size_t base = 0;
  if (op.has_vertex()) {
    f.vertex_value = x[0];
    base = 1;
  }
  for (const auto& c : op.chains()) {
    f.edges.emplace_back(x.begin() + static_cast<long>(base),
                         x.begin() + static_cast<long>(base + c.diag.size()));
    base += c.diag.size();
  }
  return f;
}

std::vector<double> to_flat(const DiscreteOperator& op, const EdgeFunction& f) {
  std::vector<double> x;
  x.reserve(flat_size(op));
  if (op.has_vertex()) x.push_back(f.vertex_value.value_or(0.0));
  for (const auto& e : f.edges) x.insert(x.end(), e.begin(), e.end());
  return x;
}

double residual_scale(const DiscreteOperator& op, double eigenvalue) {
  double row = 0.0, mmax = 0.0;
  if (op.has_vertex()) {
    double acc = std::abs(op.vertex().diag);
    for (const auto& c : op.chains()) acc += std::abs(c.coupling);
    row = acc;
    mmax = op.vertex().mass;
  }
  for (const auto& c : op.chains()) {
    for (size_t i = 0; i < c.diag.size(); ++i) {
      double acc = std::abs(c.diag[i]) + 2.0 * std::abs(c.off) + std::abs(c.coupling);
      row = std::max(row, acc);
      mmax = std::max(mmax, c.mass[i]);
    }
  }
  return row + std::abs(eigenvalue) * mmax;
}

std::vector<double> inverse_iterate(const DiscreteOperator& op, double eigenvalue,
                                    const SolverOptions& opts,
                                    const std::vector<std::vector<double>>& deflate) {
  if (op.structure() == OpStructure::direct_sum)
    throw Error(Errc::invalid_argument, "eigenvector of a direct sum: solve the parts");
  const double sigma = eigenvalue + 0.1 * opts.tol_eig;
  ShiftedFactor f = factor_shifted(op, sigma);
  const double scale = residual_scale(op, eigenvalue);

  std::mt19937_64 rng(0x51f1c0de5eedULL + static_cast<std::uint64_t>(flat_size(op)));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(flat_size(op));
  for (auto& v : x) v = u(rng);

  std::vector<double> b, ax, mx;
  // Aim an order below the documented 1e-8 residual so derived properties
  // (vertex vanishing, sector structure) sit safely inside their tolerances;
  // fall back to the best iterate if only the documented level was reached.
  std::vector<double> best;
  double best_r = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 50; ++iter) {
    for (const auto& w : deflate) {
      double c = mass_dot(op, w, x);
      for (size_t i = 0; i < x.size(); ++i) x[i] -= c * w[i];
    }
    double nrm = std::sqrt(std::max(mass_dot(op, x, x), 1e-300));
    for (auto& v : x) v /= nrm;

    apply_stiffness_flat(op, x, ax);
    apply_mass_flat(op, x, mx);
    double r2 = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
      double r = ax[i] - eigenvalue * mx[i];
      r2 += r * r;
    }
    const double r = std::sqrt(r2);
    if (iter > 0 && r < best_r) {
      best_r = r;
      best = x;
    }
    if (r <= 1e-12 * scale && iter > 0) return x;

    apply_mass_flat(op, x, b);
    solve_shifted(op, f, b, x);
  }
  if (best_r <= 1e-8 * scale) return best;
  throw Error(Errc::no_convergence, "inverse iteration did not converge in 50 steps");
}

}  // namespace

int inertia(const DiscreteOperator& op, double shift) { return inertia_once(op, shift); }

double default_tol_zero(const DiscreteOperator& op) {
  return 1e-10 * std::max(1.0, op.max_abs_potential());
}

namespace {

Spectrum negative_spectrum_fixed(const DiscreteOperator& op, const SolverOptions& opts,
                                 double tol_zero) {
  if (op.structure() == OpStructure::direct_sum) {
    std::vector<Spectrum> parts;
    parts.reserve(op.parts().size());
    for (const auto& p : op.parts()) parts.push_back(negative_spectrum_fixed(p, opts, tol_zero));
    return merge_spectra(parts);
  }

  Spectrum spec;
  spec.tol_eig = opts.tol_eig;
  spec.tol_zero = tol_zero;

  const double hi0 = -tol_zero;
  double lo0 = op.min_potential() - 1.0;
  for (int guard = 0; guard < 64 && inertia_guarded(op, lo0, opts.max_pivot_retries) > 0; ++guard)
    lo0 = 2.0 * lo0 - 1.0;

  const int m = inertia_guarded(op, hi0, opts.max_pivot_retries);
  const int m_at_zero = inertia_guarded(op, 0.0, opts.max_pivot_retries);
  spec.near_zero_flag = (m_at_zero != m);
  if (m == 0) return spec;

  // per-index brackets, tightened by every inertia evaluation
  std::vector<double> lo(static_cast<size_t>(m), lo0), hi(static_cast<size_t>(m), hi0);
  for (int k = 0; k < m; ++k) {
    auto ku = static_cast<size_t>(k);
    while (hi[ku] - lo[ku] > opts.tol_eig) {
      double mid = 0.5 * (lo[ku] + hi[ku]);
      if (!(mid > lo[ku] && mid < hi[ku])) break;  // bracket at ulp resolution
      int s = inertia_guarded(op, mid, opts.max_pivot_retries);
      for (int j = 0; j < m; ++j) {
        auto ju = static_cast<size_t>(j);
        if (j < s)
          hi[ju] = std::min(hi[ju], mid);
        else
          lo[ju] = std::max(lo[ju], mid);
      }
    }
    spec.eigenvalues.push_back(0.5 * (lo[ku] + hi[ku]));
  }
  std::sort(spec.eigenvalues.begin(), spec.eigenvalues.end());
  return spec;
}

}  // namespace

Spectrum negative_spectrum(const DiscreteOperator& op, const SolverOptions& opts) {
  const double tol_zero = opts.tol_zero * std::max(1.0, op.max_abs_potential());
  return negative_spectrum_fixed(op, opts, tol_zero);
}

Spectrum merge_spectra(const std::vector<Spectrum>& parts) {
  Spectrum out;
  for (const auto& p : parts) {
    out.eigenvalues.insert(out.eigenvalues.end(), p.eigenvalues.begin(), p.eigenvalues.end());
    out.near_zero_flag = out.near_zero_flag || p.near_zero_flag;
    out.tol_eig = std::max(out.tol_eig, p.tol_eig);
    out.tol_zero = std::max(out.tol_zero, p.tol_zero);
  }
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
  return out;
}

double riesz_mean(const Spectrum& spec, double gamma) {
  if (gamma < 0.0) throw Error(Errc::gamma_out_of_range, "riesz_mean needs gamma >= 0");
  double acc = 0.0;
  for (double e : spec.eigenvalues) acc += std::pow(-e, gamma);
  return acc;
}

EdgeFunction eigenvector(const DiscreteOperator& op, double eigenvalue,
                         const SolverOptions& opts) {
  return to_edge_function(op, inverse_iterate(op, eigenvalue, opts, {}));
}

std::vector<EdgeFunction> eigenvector_cluster(const DiscreteOperator& op, double eigenvalue,
                                              int multiplicity, const SolverOptions& opts) {
  std::vector<std::vector<double>> found;
  std::vector<EdgeFunction> out;
  for (int k = 0; k < multiplicity; ++k) {
    found.push_back(inverse_iterate(op, eigenvalue, opts, found));
    out.push_back(to_edge_function(op, found.back()));
  }
  return out;
}

double mass_inner(const DiscreteOperator& op, const EdgeFunction& a, const EdgeFunction& b) {
  return mass_dot(op, to_flat(op, a), to_flat(op, b));
}

double pencil_residual(const DiscreteOperator& op, double eigenvalue, const EdgeFunction& psi) {
  auto x = to_flat(op, psi);
  std::vector<double> ax, mx;
  apply_stiffness_flat(op, x, ax);
  apply_mass_flat(op, x, mx);
  double r2 = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    double r = ax[i] - eigenvalue * mx[i];
    r2 += r * r;
  }
  return std::sqrt(r2) / residual_scale(op, eigenvalue);
}

}  // namespace qglt
