#pragma once

// Matrix of multiplication by (x1 + i x2)^k on spherical harmonics of S^2 with
// degree <= l_max, in the complex orthonormal basis with Condon-Shortley phase.

#include <vector>

#include "isores/parallel.hpp"
#include "isores/types.hpp"

namespace isores {

struct ShiftMatrix {
  int k = 1;
  int l_max = 0;
  int n_gauss = 0;
  int n_azimuthal = 0;
  CMatrix entries;  // rows (l', m'), columns (l, m), both in index() order

  static int index(int l, int m) { return l * l + l + m; }
  int dimension() const { return (l_max + 1) * (l_max + 1); }
  /// Azimuthal weight m of basis position i.
  static int weight_of(int i);
};

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Entries <Y_l'^m', (x1 + i x2)^k Y_l^m> by Gauss-Legendre in cos(theta) times
/// the trapezoid rule in phi. Throws quadrature_underresolved when the Gram
/// matrix of the basis under the same rule deviates from I by more than 1e-10.
ShiftMatrix multiplication_matrix(int k, int l_max, int n_gauss, int n_azimuthal, Exec exec = default_exec());

struct ShiftReport {
  double max_violation = 0.0;  // largest |entry| with m' != m + k
  bool triangular_in_m = true;
};

ShiftReport shift_verify(const ShiftMatrix& s);

struct NilpotencyReport {
  int power = 0;  // ceil((2 l_max + 1) / k)
  double residual = 0.0;  // max |(S^power)_{ab}|
};

NilpotencyReport nilpotency(const ShiftMatrix& s);

/// max |D S D^{-1} - e^{i k alpha} S| with D = diag(e^{i m alpha}).
double phase_equivariance_defect(const ShiftMatrix& s, double alpha);

}  // namespace isores
