#pragma once

#include <optional>
#include <vector>

#include "qglt/operators.hpp"

namespace qglt {

struct SolverOptions {
  double tol_eig = 1e-10;    // absolute bisection width for eigenvalues
  double tol_zero = 1e-10;   // states above -tol_zero are ignored
  int max_pivot_retries = 3;
};

// Negative part of the spectrum, ascending; degenerate eigenvalues appear as
// repeated entries (inertia jump across one terminal bracket).
struct Spectrum {
  std::vector<double> eigenvalues;
  double tol_eig = 1e-10;
  double tol_zero = 1e-10;
  bool near_zero_flag = false;  // inertia at 0 differs from inertia at -tol_zero

  int count() const { return static_cast<int>(eigenvalues.size()); }
  bool empty() const { return eigenvalues.empty(); }
};

// Number of pencil eigenvalues strictly below `shift` (Sylvester inertia of
// A - shift*M via structured LDL^T: chains eliminated inward, vertex last).
// Throws Errc::pivot_breakdown when a pivot is within 1e-14*scale of zero.
int inertia(const DiscreteOperator& op, double shift);

// tol_zero scaled to the operator: 1e-10 * max(1, max |potential entry|).
double default_tol_zero(const DiscreteOperator& op);

Spectrum negative_spectrum(const DiscreteOperator& op, const SolverOptions& opts = {});

// Merge spectra of independent parts into one ascending spectrum.
Spectrum merge_spectra(const std::vector<Spectrum>& parts);

// sum |E_k|^gamma over the negative eigenvalues; gamma = 0 counts states.
double riesz_mean(const Spectrum& spec, double gamma);

// Mesh function on the operator's unknowns, mass-normalized.
struct EdgeFunction {
  std::optional<double> vertex_value;      // shared vertex / center node value
  std::vector<std::vector<double>> edges;  // per chain, node 1..M
};

// Inverse iteration at shift eigenvalue + 0.1*tol_eig. Throws
// Errc::no_convergence after 50 iterations, Errc::degenerate_spectrum never
// (clusters converge to some vector of the eigenspace).
EdgeFunction eigenvector(const DiscreteOperator& op, double eigenvalue,
                         const SolverOptions& opts = {});

// Mass-orthonormal basis of a (near-)degenerate cluster at `eigenvalue`.
std::vector<EdgeFunction> eigenvector_cluster(const DiscreteOperator& op, double eigenvalue,
                                              int multiplicity, const SolverOptions& opts = {});

double mass_inner(const DiscreteOperator& op, const EdgeFunction& a, const EdgeFunction& b);

// Residual ||(A - E M) psi||_2 relative to the operator scale; used by tests.
double pencil_residual(const DiscreteOperator& op, double eigenvalue, const EdgeFunction& psi);

}  // namespace qglt
