#pragma once

// Independent reference values used by the unit tests and the acceptance
// runner. None of these call into the library.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// First positive zero of J_nu by bisection on the power series, evaluated in
/// 50-digit arithmetic.
double bessel_first_zero(int nu);

/// Wigner 3j symbol by the Racah formula.
double wigner3j(int j1, int j2, int j3, int m1, int m2, int m3);

/// <Y_l2^m2, (x1 + i x2)^k Y_l^m> on the unit sphere (orthonormal complex
/// harmonics, Condon-Shortley phase), through Y_k^k and the Gaunt integral.
double shift_gaunt(int k, int l2, int m2, int l, int m);

/// Roots of the characteristic polynomial of a, with the coefficients from the
/// Faddeev-LeVerrier recursion and the roots from its companion matrix.
std::vector<std::complex<double>> characteristic_roots(const Eigen::MatrixXcd& a);

/// Dense eigenvalues by Eigen's own complex QR (no LAPACK).
std::vector<std::complex<double>> eigen_reference(const Eigen::MatrixXcd& a);

/// Largest distance from an element of a to its nearest unused element of b.
double multiset_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b);

}  // namespace oracle
