#include "qglt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace qglt {

namespace {

// One backward step through a constant segment: given (u, u') at the right
// end, return values at the left end.  q = V + kappa^2 selects the branch:
// cosh/sinh (q > 0), cos/sin (q < 0), linear (q ~ 0).
void propagate_back(double& u, double& du, double len, double v, double kappa) {
  const double q = v + kappa * kappa;
  const double qscale = std::max(1.0, kappa * kappa + std::abs(v));
  double nu, ndu;
  if (std::abs(q) <= 1e-14 * qscale) {
    nu = u - len * du;
    ndu = du;
  } else if (q > 0.0) {
    const double mu = std::sqrt(q);
    const double ch = std::cosh(mu * len), sh = std::sinh(mu * len);
    nu = ch * u - (sh / mu) * du;
    ndu = -mu * sh * u + ch * du;
  } else {
    const double k = std::sqrt(-q);
    const double c = std::cos(k * len), s = std::sin(k * len);
    nu = c * u - (s / k) * du;
    ndu = k * s * u + c * du;
  }
  u = nu;
  du = ndu;
  // keep magnitudes tame; the factor is positive and continuous in kappa, so
  // signs and zeros of (u, u') survive the rescaling
  double scale = std::max(std::abs(u), std::abs(du) / std::max(1.0, kappa));
  if (scale > 0.0) {
    u /= scale;
    du /= scale;
  }
}

}  // namespace

BoundaryData decaying_solution(const EdgePotential& profile, double kappa) {
  if (kappa < 0.0) throw Error(Errc::nonpositive_kappa, "decaying solution needs kappa >= 0");
  double u = 1.0, du = -kappa;
  const auto& segs = profile.segments();
  for (auto it = segs.rbegin(); it != segs.rend(); ++it)
    propagate_back(u, du, it->length, it->value, kappa);
  return {u, du};
}

double dtn_value(const EdgePotential& profile, double kappa) {
  BoundaryData bd = decaying_solution(profile, kappa);
  return bd.du / bd.u;
}

double default_kappa_max(const PotentialField& field) {
  return std::sqrt(field.max_depth()) + 1.0;
}

double delta_line_eigenvalue(double alpha) {
  if (!(alpha > 0.0))
    throw Error(Errc::nonpositive_alpha, "delta coupling must be positive for a bound state");
  return -alpha * alpha / 4.0;
}

namespace {

using Fn = std::function<double(double)>;

// bisection on a sign change; returns the midpoint of the final bracket
double bisect_root(const Fn& f, double lo, double hi, double flo, double tol) {
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> scan_roots(const Fn& f, double lo, double hi, int points, double tol_rel) {
  std::vector<double> roots;
  if (points < 2 || !(hi > lo)) return roots;
  double prev_x = lo, prev_f = f(lo);
  for (int i = 1; i <= points; ++i) {
    double x = lo + (hi - lo) * static_cast<double>(i) / points;
    double fx = f(x);
    if (prev_f == 0.0) {
      roots.push_back(prev_x);
    } else if (fx != 0.0 && (fx < 0.0) != (prev_f < 0.0)) {
      double tol = tol_rel * std::max(1.0, x);
      roots.push_back(bisect_root(f, prev_x, x, prev_f, tol));
    }
    prev_x = x;
    prev_f = fx;
  }
  if (prev_f == 0.0) roots.push_back(prev_x);
  return roots;
}

struct EdgeEval {
  double a = 0.0;  // u(0)
  double b = 0.0;  // u'(0)
};

std::vector<EdgeEval> eval_edges(const std::vector<const EdgePotential*>& edges, double kappa) {
  std::vector<EdgeEval> out;
  out.reserve(edges.size());
  for (const auto* p : edges) {
    BoundaryData bd = decaying_solution(*p, kappa);
    out.push_back({bd.u, bd.du});
  }
  return out;
}

// pole-free Kirchhoff secular function W = sum_j b_j prod_{i != j} a_i
double secular_w(const std::vector<EdgeEval>& ev) {
  double w = 0.0;
  for (size_t j = 0; j < ev.size(); ++j) {
    double term = ev[j].b;
    for (size_t i = 0; i < ev.size(); ++i)
      if (i != j) term *= ev[i].a;
    w += term;
  }
  return w;
}

struct Pipeline {
  std::vector<const EdgePotential*> edges;
  double kappa_max = 1.0;
  ScanOptions opts;

  std::vector<SecularRoot> run(int points) const {
    std::vector<SecularRoot> out;
    auto wfun = [&](double k) { return secular_w(eval_edges(edges, k)); };

    for (double k : scan_roots(wfun, opts.kappa_min, kappa_max, points, opts.bracket_tol)) {
      auto ev = eval_edges(edges, k);
      int tiny = 0;
      for (const auto& e : ev)
        if (std::abs(e.a) <= opts.vanish_tol) ++tiny;
      if (tiny >= 2) continue;  // vertex-vanishing cluster, counted below
      out.push_back({k, -k * k, 1, RootType::kirchhoff});
    }

    // per-edge Dirichlet-type roots; coincidences across >= 2 edges are
    // vertex-vanishing states of multiplicity (count - 1)
    std::vector<std::pair<double, size_t>> droots;  // kappa, edge
    for (size_t j = 0; j < edges.size(); ++j) {
      auto afun = [&](double k) { return decaying_solution(*edges[j], k).u; };
      for (double k : scan_roots(afun, opts.kappa_min, kappa_max, points, opts.bracket_tol))
        droots.push_back({k, j});
    }
    std::sort(droots.begin(), droots.end());
    size_t i = 0;
    while (i < droots.size()) {
      size_t jend = i + 1;
      std::vector<size_t> members{droots[i].second};
      while (jend < droots.size() &&
             droots[jend].first - droots[i].first <= opts.cluster_tol * std::max(1.0, droots[i].first)) {
        members.push_back(droots[jend].second);
        ++jend;
      }
      std::sort(members.begin(), members.end());
      members.erase(std::unique(members.begin(), members.end()), members.end());
      if (members.size() >= 2) {
        double k = droots[i].first;
        out.push_back({k, -k * k, static_cast<int>(members.size()) - 1,
                       RootType::vertex_dirichlet});
      }
      i = jend;
    }

    std::sort(out.begin(), out.end(),
              [](const SecularRoot& x, const SecularRoot& y) { return x.energy < y.energy; });
    return out;
  }
};

int total_multiplicity(const std::vector<SecularRoot>& roots) {
  int n = 0;
  for (const auto& r : roots) n += r.multiplicity;
  return n;
}

SecularResult finish(const Pipeline& pipe) {
  int base_points = std::max(pipe.opts.scan_points, 1000);
  auto coarse = pipe.run(base_points);
  auto fine = pipe.run(10 * base_points);

  SecularResult res;
  res.roots = fine;
  res.scan_points = 10 * base_points;
  res.scan_too_coarse = total_multiplicity(coarse) != total_multiplicity(fine);
  res.spectrum.tol_eig = 1e-11;
  res.spectrum.tol_zero = pipe.opts.kappa_min * pipe.opts.kappa_min;
  for (const auto& r : fine)
    for (int m = 0; m < r.multiplicity; ++m) res.spectrum.eigenvalues.push_back(r.energy);
  std::sort(res.spectrum.eigenvalues.begin(), res.spectrum.eigenvalues.end());
  return res;
}

}  // namespace

SecularResult secular_bound_states(const PotentialField& field, double kappa_max,
                                   const ScanOptions& opts) {
  if (!(kappa_max > 0.0))
    throw Error(Errc::nonpositive_kappa, "secular scan needs kappa_max > 0");
  Pipeline pipe;
  for (const auto& e : field.per_edge) pipe.edges.push_back(&e);
  pipe.kappa_max = kappa_max;
  pipe.opts = opts;
  return finish(pipe);
}

SecularResult secular_bound_states(const PotentialField& field) {
  return secular_bound_states(field, default_kappa_max(field));
}

SecularResult half_line_bound_states(const EdgePotential& profile, VertexBc bc,
                                     double kappa_max, const ScanOptions& opts) {
  if (!(kappa_max > 0.0))
    throw Error(Errc::nonpositive_kappa, "secular scan needs kappa_max > 0");
  if (bc == VertexBc::kirchhoff) bc = VertexBc::neumann;

  int base_points = std::max(opts.scan_points, 1000);
  auto run = [&](int points) {
    std::vector<SecularRoot> out;
    auto fun = [&](double k) {
      BoundaryData bd = decaying_solution(profile, k);
      return bc == VertexBc::neumann ? bd.du : bd.u;
    };
    RootType type = bc == VertexBc::neumann ? RootType::neumann : RootType::dirichlet;
    for (double k : scan_roots(fun, opts.kappa_min, kappa_max, points, opts.bracket_tol))
      out.push_back({k, -k * k, 1, type});
    std::sort(out.begin(), out.end(),
              [](const SecularRoot& x, const SecularRoot& y) { return x.energy < y.energy; });
    return out;
  };

  auto coarse = run(base_points);
  auto fine = run(10 * base_points);
  SecularResult res;
  res.roots = fine;
  res.scan_points = 10 * base_points;
  res.scan_too_coarse = total_multiplicity(coarse) != total_multiplicity(fine);
  res.spectrum.tol_eig = 1e-11;
  res.spectrum.tol_zero = opts.kappa_min * opts.kappa_min;
  for (const auto& r : fine) res.spectrum.eigenvalues.push_back(r.energy);
  std::sort(res.spectrum.eigenvalues.begin(), res.spectrum.eigenvalues.end());
  return res;
}

SecularResult line_bound_states(const LinePotential& line, double kappa_max,
                                const ScanOptions& opts) {
  PotentialField as_star(StarGraph(2), {line.neg, line.pos});
  return secular_bound_states(as_star, kappa_max, opts);
}

}  // namespace qglt
