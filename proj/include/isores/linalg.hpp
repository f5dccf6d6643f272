#pragma once

// Dense complex eigenvalue and rank machinery. Eigen stores the matrices; the
// decompositions themselves are LAPACK (zgeev, zgees, zgesdd).

#include <functional>
#include <optional>
#include <vector>

#include "isores/types.hpp"

namespace isores {

struct EigenResult {
  std::vector<cplx> values;
  std::optional<CMatrix> right;  // columns are unit-norm right eigenvectors
  std::optional<CMatrix> left;   // columns u with u^H A = lambda u^H
};

/// Full spectrum of a square complex matrix. Throws non_convergence rather than
/// returning a partial spectrum.
EigenResult eigen_all(const CMatrix& a, bool want_right = false, bool want_left = false);

/// Complex Schur form A = Q T Q^H.
struct SchurForm {
  CMatrix t;
  CMatrix q;  // empty when vectors were not requested
  std::vector<cplx> eigenvalues() const;
};
SchurForm schur(const CMatrix& a, bool want_vectors);

/// Singular values in decreasing order.
std::vector<double> singular_values(const CMatrix& a);

/// Number of singular values above tol times the largest one.
int rank_numeric(const CMatrix& a, double tol);

/// Spectral 2-norm.
double norm2(const CMatrix& a);

struct JordanReport {
  cplx location;
  int algebraic_multiplicity = 0;
  int geometric_multiplicity = 0;
  int order = 0;                   // size of the largest Jordan block
  std::vector<int> rank_sequence;  // rank((A - location I)^k), k = 1, 2, ...
};

/// Jordan structure of A at lambda0. Ranks use the threshold tol * scale, where
/// scale defaults to max(1, ||A||_2). Every rank decision demands a gap ratio of
/// at least 10 between the smallest kept and the largest discarded singular value;
/// otherwise an ambiguous_cluster error is thrown.
JordanReport jordan_structure(const CMatrix& a, cplx lambda0, double tol = 1e-8, double scale = 0.0);

/// Riesz projector (1/2 pi i) \oint (z - A)^{-1} dz on a circle, trapezoid rule
/// with q_nodes >= 64 points. Throws eigenvalue_on_contour when an eigenvalue of A
/// lies within 1e-8 of the circle.
CMatrix spectral_projector(const CMatrix& a, const Circle& contour, int q_nodes = 64);

/// Projector applied to a block of probe vectors, given only a shifted solver
/// solve(z, B) = (A - z I)^{-1} B. Used for structured operators too large to
/// form densely.
using ShiftedSolver = std::function<CMatrix(cplx, const CMatrix&)>;
CMatrix apply_spectral_projector(const ShiftedSolver& solve, const CMatrix& probes,
                                 const Circle& contour, int q_nodes = 64);

/// Orthonormal basis of the numerical range of a tall matrix (relative tolerance tol).
CMatrix range_basis(const CMatrix& a, double tol);

}  // namespace isores
