#pragma once

// Discretization of radial operators and assembly of the mode-coupled block
// operator. Blocks are indexed by mode; a weight-m component of the potential
// fills the diagonal block A[j+m][j].

#include <optional>
#include <utility>
#include <vector>

#include "isores/linalg.hpp"
#include "isores/parallel.hpp"
#include "isores/potentials.hpp"
#include "isores/scaling.hpp"
#include "isores/types.hpp"

namespace isores {

enum class Scheme { finite_difference_2nd, chebyshev_collocation };

struct Discretization {
  Scheme scheme = Scheme::finite_difference_2nd;
  int n = 200;          // unknowns, which is also the matrix dimension
  double t_min = -20.0;
  double t_max = 20.0;
  /// Chebyshev panel boundaries strictly inside (t_min, t_max). Values are
  /// continuous there and the flux is matched; placing them at the contour kinks
  /// keeps spectral accuracy.
  std::vector<double> breakpoints;
  /// Relative share of nodes per panel; empty means 1 for the outer panels and 2
  /// for the inner ones.
  std::vector<double> panel_weights;

  static Discretization full_line(Scheme scheme, int n, double r_max);
  /// [r_min, r_max]. Chebyshev ignores r_min and folds the regular pole onto [-r_max, r_max].
  static Discretization half_line(Scheme scheme, int n, double r_max, double r_min = 1e-6);
};

/// Nodes of a discretization and the contour data seen by every mode.
struct GridGeometry {
  std::vector<double> t;  // strictly increasing
  std::vector<cplx> r;    // contour points r(t_i)
  /// Quadrature weights in the contour variable: integral of g dr ~ sum w_i g(r_i).
  CVector weights;
};

GridGeometry grid_geometry(const Discretization& d, const ScalingContour& contour);

/// Dense n x n matrix of -(1/r') d/dt (1/r') d/dt + W_j(r(t)) with Dirichlet
/// ends. Half-line models use Dirichlet at r_min (finite differences) or the
/// folded form -v'' - v'/r + (W + 1/(4 r^2)) v of w = sqrt(r) v (Chebyshev).
CMatrix discretize(const ScaledOperator& op, const Discretization& d);
CMatrix discretize(const RadialOperator& op, const Discretization& d);

struct DroppedCoupling {
  int source = 0;
  int weight = 0;
};

/// A[target][source] = diag(values).
struct Coupling {
  int target = 0;
  int source = 0;
  CVector values;
};

class BlockOperator {
 public:
  int j_min = 0;
  int j_max = 0;
  Eigen::Index block_size = 0;
  std::vector<CMatrix> diagonal;  // indexed by j - j_min
  std::vector<Coupling> couplings;
  GridGeometry grid;
  std::vector<DroppedCoupling> dropped;

  int mode_count() const { return j_max - j_min + 1; }
  Eigen::Index dimension() const { return block_size * mode_count(); }
  Eigen::Index offset(int j) const { return block_size * (j - j_min); }
  const CMatrix& diagonal_block(int j) const { return diagonal[static_cast<std::size_t>(j - j_min)]; }

  CMatrix block(int target, int source) const;
  CMatrix dense() const;
  /// A restricted to the listed modes, in that order.
  CMatrix dense_submatrix(const std::vector<int>& modes) const;
  /// A x for a block of column vectors.
  CMatrix apply(const CMatrix& x, Exec exec = default_exec()) const;
};

/// Pass std::nullopt for an unscaled assembly. Throws mode_range when a
/// component weight cannot land inside [j_min, j_max] from any mode; weights
/// that leave the range only from edge modes are recorded in dropped.
BlockOperator assemble_coupled(const ModelSurface& model, const std::optional<ScalingContour>& contour, int j_min,
                               int j_max, const PotentialSum& v, const Discretization& d,
                               Exec exec = default_exec());

/// Largest |entry| over blocks A[j'][j] with j' < j; 0 means block lower triangular.
double triangularity_check(const BlockOperator& b);

/// Strongly connected components of a directed graph on 0..nodes-1 (edges
/// source -> target), listed so that every edge goes from an earlier or the same
/// component to a later one. Each component is sorted.
std::vector<std::vector<int>> ordered_components(int nodes, const std::vector<std::pair<int, int>>& edges);

/// Schur factorization of a block operator, one dense factorization per
/// strongly connected group of modes. The spectrum is the union of the group
/// spectra; for a shift potential every group is a single mode.
class BlockSchur {
 public:
  BlockSchur(const BlockOperator& op, bool want_vectors, Exec exec = default_exec());

  const std::vector<std::vector<int>>& groups() const { return groups_; }
  std::vector<cplx> eigenvalues() const;
  /// (A - z I)^{-1} rhs by block forward substitution; needs want_vectors.
  CMatrix solve_shifted(cplx z, const CMatrix& rhs) const;

 private:
  const BlockOperator* op_;
  std::vector<std::vector<int>> groups_;
  std::vector<int> group_of_mode_;
  std::vector<SchurForm> forms_;
};

}  // namespace isores
