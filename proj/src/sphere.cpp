#include "isores/sphere.hpp"

#include <cmath>

#include "isores/error.hpp"

namespace isores {

namespace {

constexpr double violation_floor = 1e-12;

// Y_l^m(theta, 0) for any sign of m; std::sph_legendre carries the (-1)^m phase.
double ylm_polar(int l, int m, double theta) {
  const unsigned am = static_cast<unsigned>(std::abs(m));
  const double v = std::sph_legendre(static_cast<unsigned>(l), am, theta);
  return (m < 0 && (am % 2 == 1)) ? -v : v;
}

}  // namespace

int ShiftMatrix::weight_of(int i) {
  const int l = static_cast<int>(std::floor(std::sqrt(static_cast<double>(i))));
  return i - l * l - l;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw Error(ErrorKind::invalid_parameter, "Gauss-Legendre order must be >= 1");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
}

ShiftMatrix multiplication_matrix(int k, int l_max, int n_gauss, int n_azimuthal, Exec exec) {
  if (k < 1) throw Error(ErrorKind::invalid_parameter, "shift weight k must be >= 1");
  if (l_max < 0) throw Error(ErrorKind::invalid_parameter, "l_max must be >= 0");
  if (n_gauss < l_max + k + 2) throw Error(ErrorKind::quadrature_underresolved, "n_gauss must be >= l_max + k + 2");
  if (n_azimuthal < 2 * (l_max + k) + 2) {
    throw Error(ErrorKind::quadrature_underresolved, "n_azimuthal must be >= 2 (l_max + k) + 2");
  }
  ShiftMatrix s;
  s.k = k;
  s.l_max = l_max;
  s.n_gauss = n_gauss;
  s.n_azimuthal = n_azimuthal;
  const int dim = s.dimension();

  std::vector<double> x, w;
  gauss_legendre(n_gauss, x, w);
  const auto nq = static_cast<std::size_t>(n_gauss);
  const auto np = static_cast<std::size_t>(n_azimuthal);
  const double dphi = 2.0 * pi / n_azimuthal;

  // Basis values at every quadrature point, rows = points.
  CMatrix y(static_cast<Eigen::Index>(nq * np), dim);
  std::vector<double> weight(nq * np);
  std::vector<cplx> factor(nq * np);
  for_each_index(nq, [&](std::size_t q) {
    const double theta = std::acos(x[q]);
    const double st = std::sqrt(1.0 - x[q] * x[q]);
    for (std::size_t p = 0; p < np; ++p) {
      const double phi = dphi * static_cast<double>(p);
      const auto row = static_cast<Eigen::Index>(q * np + p);
      weight[q * np + p] = w[q] * dphi;
      factor[q * np + p] = std::pow(st, k) * std::polar(1.0, k * phi);
      for (int l = 0; l <= l_max; ++l) {
        for (int m = -l; m <= l; ++m) y(row, ShiftMatrix::index(l, m)) = ylm_polar(l, m, theta) * std::polar(1.0, m * phi);
      }
    }
  }, exec);

  CMatrix wy = y;
  CMatrix fy = y;
  for (Eigen::Index r = 0; r < y.rows(); ++r) {
    wy.row(r) *= weight[static_cast<std::size_t>(r)];
    fy.row(r) *= factor[static_cast<std::size_t>(r)];
  }
  CMatrix gram(dim, dim);
  s.entries.resize(dim, dim);
  for_each_index(static_cast<std::size_t>(dim), [&](std::size_t c) {
    const auto col = static_cast<Eigen::Index>(c);
    gram.col(col) = wy.adjoint() * y.col(col);
    s.entries.col(col) = wy.adjoint() * fy.col(col);
  }, exec);

  const double residual = (gram - CMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (residual > 1e-10) {
    throw Error(ErrorKind::quadrature_underresolved, "Gram residual " + std::to_string(residual));
  }
  return s;
}

ShiftReport shift_verify(const ShiftMatrix& s) {
  ShiftReport rep;
  const int dim = s.dimension();
  for (int c = 0; c < dim; ++c) {
    const int m = ShiftMatrix::weight_of(c);
    for (int r = 0; r < dim; ++r) {
      if (ShiftMatrix::weight_of(r) == m + s.k) continue;
      rep.max_violation = std::max(rep.max_violation, std::abs(s.entries(r, c)));
    }
  }
  rep.triangular_in_m = rep.max_violation < violation_floor;
  return rep;
}

NilpotencyReport nilpotency(const ShiftMatrix& s) {
  NilpotencyReport rep;
  rep.power = (2 * s.l_max + 1 + s.k - 1) / s.k;
  CMatrix p = CMatrix::Identity(s.dimension(), s.dimension());
  for (int i = 0; i < rep.power; ++i) p = p * s.entries;
  rep.residual = s.dimension() > 0 ? p.cwiseAbs().maxCoeff() : 0.0;
  return rep;
}

double phase_equivariance_defect(const ShiftMatrix& s, double alpha) {
  const int dim = s.dimension();
  const cplx shift = std::polar(1.0, s.k * alpha);
  double defect = 0.0;
  for (int c = 0; c < dim; ++c) {
    for (int r = 0; r < dim; ++r) {
      const int dm = ShiftMatrix::weight_of(r) - ShiftMatrix::weight_of(c);
      const cplx conj = std::polar(1.0, dm * alpha) * s.entries(r, c);
      defect = std::max(defect, std::abs(conj - shift * s.entries(r, c)));
    }
  }
  return defect;
}

}  // namespace isores
