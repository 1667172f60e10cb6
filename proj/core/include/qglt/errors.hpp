#pragma once

#include <stdexcept>
#include <string>

namespace qglt {

// Stable error identities; tests match on the code, messages are for humans.
enum class Errc {
  invalid_argument,
  schema_error,
  offset_too_small,
  gamma_out_of_range,
  support_exceeds_grid,
  odd_edge_count,
  even_edge_count,
  empty_split,
  pivot_breakdown,
  no_convergence,
  nonpositive_kappa,
  nonpositive_alpha,
  zero_norm,
  parity_violation,
  degenerate_spectrum,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace qglt
