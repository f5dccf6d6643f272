#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "isores/grid.hpp"
#include "isores/models.hpp"
#include "isores/potentials.hpp"
#include "isores/scaling.hpp"

namespace isores {

/// det_p(I + K) = prod_n (1 + l_n) exp(sum_{k=1}^{p-1} (-1)^k l_n^k / k) over the
/// eigenvalues l_n of K.
cplx det_reg(std::span<const cplx> eigenvalues, int p);
cplx det_reg(const CMatrix& k, int p);
/// Same quantity as det(I + K) exp(sum_{k=1}^{p-1} (-1)^k tr(K^k) / k), with the
/// determinant from an LU factorization. Stable for nilpotent and other highly
/// non-normal kernels whose computed eigenvalues scatter.
cplx det_reg_trace(const CMatrix& k, int p);

/// lambda -> det_p(I + K(lambda)), with K(lambda) given through its spectrum so
/// that structured kernels never need to be formed densely.
class DetFunction {
 public:
  using Spectrum = std::function<std::vector<cplx>(cplx)>;

  DetFunction(int p, Spectrum spectrum);
  /// Dense kernel builder.
  static DetFunction from_kernel(int p, std::function<CMatrix(cplx)> kernel);

  int order() const { return p_; }
  cplx operator()(cplx lambda) const;

 private:
  int p_;
  Spectrum spectrum_;
};

/// Finite-section Lippmann-Schwinger kernel K(sigma) = V (A_free - z)^{-1} on
/// the mode/grid space of an assembly, with z = spectral_value(sigma). K has the
/// coupling pattern of V, so its eigenvalues are computed one strongly
/// connected mode group at a time; groups of a single mode contribute zeros.
class LsKernel {
 public:
  LsKernel(const ModelSurface& model, int j_min, int j_max, const PotentialSum& v, const Discretization& d,
           const std::optional<ScalingContour>& contour = std::nullopt);

  const BlockOperator& free_operator() const { return op_; }
  std::vector<cplx> eigenvalues(cplx sigma) const;
  CMatrix dense(cplx sigma) const;
  /// Throws singular_resolvent when z lies within 1e-8 of a free eigenvalue.
  void check_admissible(cplx sigma) const;

 private:
  CMatrix group_kernel(const std::vector<int>& modes, cplx z) const;
  CMatrix resolvent_block(int j, cplx z) const;

  ModelSurface model_;
  BlockOperator op_;  // free diagonal blocks plus the potential couplings
  std::vector<std::vector<int>> groups_;
  std::vector<cplx> free_eigenvalues_;
};

cplx ls_determinant(const ModelSurface& model, int j_min, int j_max, const PotentialSum& v, cplx sigma,
                    const Discretization& d, int p, const std::optional<ScalingContour>& contour = std::nullopt);

/// Winding number of F around the circle by the trapezoid rule on F'/F with a
/// central-difference derivative. Throws non_integer_winding when |F| <= 1e-10 at
/// a node or the result is farther than 0.1 from an integer.
int count_zeros(const std::function<cplx(cplx)>& f, const Circle& contour, int q_nodes = 128);

}  // namespace isores
