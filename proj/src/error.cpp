#include "isores/error.hpp"

namespace isores {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_parameter: return "invalid parameter";
    case ErrorKind::constraint_infeasible: return "constraint infeasible";
    case ErrorKind::continuation_domain: return "continuation domain";
    case ErrorKind::mode_range: return "mode range";
    case ErrorKind::mode_mismatch: return "mode mismatch";
    case ErrorKind::non_convergence: return "non-convergence";
    case ErrorKind::ambiguous_cluster: return "ambiguous cluster";
    case ErrorKind::eigenvalue_on_contour: return "eigenvalue on contour";
    case ErrorKind::singular_resolvent: return "singular free resolvent";
    case ErrorKind::non_integer_winding: return "non-integer winding";
    case ErrorKind::quadrature_underresolved: return "quadrature underresolved";
    case ErrorKind::refinement_failure: return "refinement failure";
    case ErrorKind::overflow: return "overflow";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

bool is_numerical(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::non_convergence:
    case ErrorKind::ambiguous_cluster:
    case ErrorKind::eigenvalue_on_contour:
    case ErrorKind::singular_resolvent:
    case ErrorKind::non_integer_winding:
    case ErrorKind::quadrature_underresolved:
    case ErrorKind::refinement_failure:
    case ErrorKind::overflow:
    case ErrorKind::continuation_domain:
      return true;
    default:
      return false;
  }
}

}  // namespace isores
