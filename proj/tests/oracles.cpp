#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_dec_float.hpp>

namespace oracle {

namespace {

using big = boost::multiprecision::cpp_dec_float_50;

big bessel_j(int nu, const big& x) {
  const big half = x / 2;
  big term = boost::multiprecision::pow(half, nu);
  for (int i = 1; i <= nu; ++i) term /= i;
  big sum = term;
  const big h2 = half * half;
  for (int k = 1; k < 400; ++k) {
    term *= -h2 / (big(k) * big(k + nu));
    sum += term;
    if (boost::multiprecision::abs(term) < big("1e-45") * (1 + boost::multiprecision::abs(sum))) break;
  }
  return sum;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

double bessel_first_zero(int nu) {
  // The first zero lies past nu; scan for the first sign change, then bisect.
  const double step = 0.05;
  big a = std::max(0.5, static_cast<double>(nu));
  big fa = bessel_j(nu, a);
  big b = a + step;
  big fb = bessel_j(nu, b);
  while (fa * fb > 0) {
    a = b;
    fa = fb;
    b += step;
    fb = bessel_j(nu, b);
  }
  for (int it = 0; it < 80; ++it) {
    const big m = (a + b) / 2;
    const big fm = bessel_j(nu, m);
    if (fa * fm <= 0) {
      b = m;
    } else {
      a = m;
      fa = fm;
    }
  }
  return static_cast<double>((a + b) / 2);
}

double wigner3j(int j1, int j2, int j3, int m1, int m2, int m3) {
  if (m1 + m2 + m3 != 0) return 0.0;
  if (j3 < std::abs(j1 - j2) || j3 > j1 + j2) return 0.0;
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3) return 0.0;
  const double tri = factorial(j1 + j2 - j3) * factorial(j1 - j2 + j3) * factorial(-j1 + j2 + j3) /
                     factorial(j1 + j2 + j3 + 1);
  const double pre = std::sqrt(tri * factorial(j1 + m1) * factorial(j1 - m1) * factorial(j2 + m2) * factorial(j2 - m2) *
                               factorial(j3 + m3) * factorial(j3 - m3));
  const int k_lo = std::max({0, j2 - j3 - m1, j1 - j3 + m2});
  const int k_hi = std::min({j1 + j2 - j3, j1 - m1, j2 + m2});
  double sum = 0.0;
  for (int k = k_lo; k <= k_hi; ++k) {
    const double den = factorial(k) * factorial(j1 + j2 - j3 - k) * factorial(j1 - m1 - k) * factorial(j2 + m2 - k) *
                       factorial(j3 - j2 + m1 + k) * factorial(j3 - j1 - m2 + k);
    sum += ((k % 2 == 0) ? 1.0 : -1.0) / den;
  }
  const int phase = j1 - j2 - m3;
  return ((phase % 2 == 0) ? 1.0 : -1.0) * pre * sum;
}

double shift_gaunt(int k, int l2, int m2, int l, int m) {
  // sin^k(theta) e^{i k phi} = (-1)^k 2^k k! sqrt(4 pi / (2k+1)!) Y_k^k.
  const double four_pi = 4.0 * M_PI;
  const double ck = ((k % 2 == 0) ? 1.0 : -1.0) * std::pow(2.0, k) * factorial(k) * std::sqrt(four_pi / factorial(2 * k + 1));
  // int conj(Y_l2^m2) Y_k^k Y_l^m = (-1)^m2 sqrt((2l2+1)(2k+1)(2l+1)/(4 pi)) (l2 k l; 0 0 0)(l2 k l; -m2 k m).
  const double g = ((m2 % 2 == 0) ? 1.0 : -1.0) * std::sqrt((2.0 * l2 + 1) * (2.0 * k + 1) * (2.0 * l + 1) / four_pi) *
                   wigner3j(l2, k, l, 0, 0, 0) * wigner3j(l2, k, l, -m2, k, m);
  return ck * g;
}

std::vector<std::complex<double>> characteristic_roots(const Eigen::MatrixXcd& a) {
  using lc = std::complex<long double>;
  const int n = static_cast<int>(a.rows());
  Eigen::Matrix<lc, Eigen::Dynamic, Eigen::Dynamic> al = a.cast<lc>();
  Eigen::Matrix<lc, Eigen::Dynamic, Eigen::Dynamic> m = Eigen::Matrix<lc, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  std::vector<lc> c(static_cast<std::size_t>(n + 1));
  c[static_cast<std::size_t>(n)] = 1.0L;
  for (int k = 1; k <= n; ++k) {
    m = al * m;
    m.diagonal().array() += c[static_cast<std::size_t>(n - k + 1)];
    const lc tr = (al * m).trace();
    c[static_cast<std::size_t>(n - k)] = -tr / static_cast<long double>(k);
  }
  // Companion matrix of the monic polynomial sum c_i z^i.
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = std::complex<double>(-c[static_cast<std::size_t>(i)]);
  return eigen_reference(comp);
}

std::vector<std::complex<double>> eigen_reference(const Eigen::MatrixXcd& a) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a, false);
  const auto& v = es.eigenvalues();
  return {v.data(), v.data() + v.size()};
}

double multiset_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  std::vector<char> used(b.size(), 0);
  for (const auto& x : a) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (used[i]) continue;
      const double d = std::abs(x - b[i]);
      if (d < best) {
        best = d;
        arg = i;
      }
    }
    used[arg] = 1;
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace oracle
