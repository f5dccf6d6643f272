#pragma once

#include <stdexcept>
#include <string>

namespace isores {

enum class ErrorKind {
  invalid_parameter,
  constraint_infeasible,
  continuation_domain,
  mode_range,
  mode_mismatch,
  non_convergence,
  ambiguous_cluster,
  eigenvalue_on_contour,
  singular_resolvent,
  non_integer_winding,
  quadrature_underresolved,
  refinement_failure,
  overflow,
  config,
};

const char* to_string(ErrorKind kind);

// Numerical failures map to CLI exit code 3; everything else is a caller error.
bool is_numerical(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace isores
