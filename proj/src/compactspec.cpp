#include "isores/compactspec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/LU>

#include "isores/error.hpp"
#include "isores/grid.hpp"
#include "isores/linalg.hpp"
#include "isores/parallel.hpp"

namespace isores {

namespace {

// C-infinity transition e^{-1/s} / (e^{-1/s} + e^{-1/(1-s)}) and its first two derivatives.
struct Blend {
  double g, g1, g2;
};

Blend smooth_transition(double s) {
  if (s <= 0.0) return {0.0, 0.0, 0.0};
  if (s >= 1.0) return {1.0, 0.0, 0.0};
  const double q = 1.0 - s;
  const double a = std::exp(-1.0 / s);
  const double b = std::exp(-1.0 / q);
  const double a1 = a / (s * s);
  const double b1 = -b / (q * q);
  const double a2 = a * (1.0 / (s * s * s * s) - 2.0 / (s * s * s));
  const double b2 = b * (1.0 / (q * q * q * q) - 2.0 / (q * q * q));
  const double d = a + b;
  const double d1 = a1 + b1;
  const double num = a1 * b - a * b1;
  const double num1 = a2 * b - a * b2;
  return {a / d, num / (d * d), num1 / (d * d) - 2.0 * num * d1 / (d * d * d)};
}

WarpValues base_warp(CapWarp w, double r) {
  if (w == CapWarp::flat) return {r, 1.0, 0.0};
  return {std::sinh(r), std::cosh(r), std::sinh(r)};
}

std::vector<double> cap_eigenvalues(const CapModel& cap, int j, int count, int n) {
  const ModelSurface base = cap.warp == CapWarp::flat ? euclidean_plane() : hyperbolic_plane();
  const double omega = static_cast<double>(j);
  auto pot = [cap, omega](cplx r) { return conjugated_potential(cap.warp_values(std::abs(r.real())), omega); };
  const RadialOperator op(base, j, omega, LeftBoundary::regular_pole, {}, pot);
  const Discretization d = Discretization::half_line(Scheme::chebyshev_collocation, n, cap.radius);
  const auto ev = eigen_all(discretize(op, d)).values;
  std::vector<cplx> sorted(ev.begin(), ev.end());
  std::sort(sorted.begin(), sorted.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  if (static_cast<int>(sorted.size()) < count) throw Error(ErrorKind::invalid_parameter, "count exceeds grid size");
  std::vector<double> out;
  for (int i = 0; i < count; ++i) {
    const cplx l = sorted[static_cast<std::size_t>(i)];
    if (std::abs(l.imag()) > 1e-10 * std::max(1.0, std::abs(l))) {
      throw Error(ErrorKind::non_convergence, "Dirichlet eigenvalue has an imaginary part");
    }
    out.push_back(l.real());
  }
  return out;
}

}  // namespace

WarpValues CapModel::warp_values(double r) const {
  const WarpValues f = base_warp(warp, r);
  if (!collar) return f;
  const double w = collar_width;
  const double start = radius - w;
  const double half = 0.5 * w;
  const double s = (r - start) / half;
  if (s <= 0.0) return f;
  const double c = base_warp(warp, radius - half).f.real();
  const Blend b = smooth_transition(s);
  const double g = b.g;
  const double g1 = b.g1 / half;
  const double g2 = b.g2 / (half * half);
  const cplx diff = c - f.f;
  return {f.f + g * diff, f.df + g1 * diff - g * f.df, f.d2f + g2 * diff - 2.0 * g1 * f.df - g * f.d2f};
}

std::vector<double> dirichlet_mode_spectrum(const CapModel& cap, int j, int count, int n) {
  if (count < 1) throw Error(ErrorKind::invalid_parameter, "count must be >= 1");
  if (!(cap.radius > 0.0)) throw Error(ErrorKind::invalid_parameter, "cap radius must be positive");
  if (cap.collar && !(cap.collar_width > 0.0 && cap.collar_width < cap.radius)) {
    throw Error(ErrorKind::invalid_parameter, "collar width must lie in (0, R)");
  }
  const auto coarse = cap_eigenvalues(cap, j, count, n);
  const auto fine = cap_eigenvalues(cap, j, 1, 2 * n);
  if (std::abs(coarse[0] - fine[0]) > 1e-6 * std::abs(fine[0])) {
    throw Error(ErrorKind::refinement_failure, "mu_1 for j = " + std::to_string(j) + " moved by " +
                                                   std::to_string(std::abs(coarse[0] - fine[0])) +
                                                   " between n and 2n");
  }
  return coarse;
}

WeylReport weyl_bound_check(const CapModel& cap, int j_lo, int j_hi, int n) {
  if (j_hi < j_lo) throw Error(ErrorKind::invalid_parameter, "empty mode range");
  WeylReport rep;
  for (int j = j_lo; j <= j_hi; ++j) rep.modes.push_back(j);
  rep.mu1.resize(rep.modes.size());
  for_each_index(rep.modes.size(), [&](std::size_t i) {
    rep.mu1[i] = dirichlet_mode_spectrum(cap, rep.modes[i], 1, n)[0];
  });
  rep.c1_est = std::numeric_limits<double>::quiet_NaN();
  rep.c2_est = 0.0;
  bool has_nonzero = false;
  for (std::size_t i = 0; i < rep.modes.size(); ++i) {
    const double j = rep.modes[i];
    rep.c2_est = std::max(rep.c2_est, rep.mu1[i] / (1.0 + j * j));
    if (j != 0.0) {
      const double ratio = rep.mu1[i] / (j * j);
      rep.c1_est = has_nonzero ? std::min(rep.c1_est, ratio) : ratio;
      has_nonzero = true;
    }
  }
  if (!has_nonzero) {
    rep.pass = std::isfinite(rep.c2_est) && rep.c2_est > 0.0;
    rep.note = "lower bound not testable at j = 0 (C1 j^2 = 0)";
    return rep;
  }
  rep.pass = std::isfinite(rep.c1_est) && std::isfinite(rep.c2_est) && rep.c1_est > 0.0 && rep.c2_est > 0.0;
  for (std::size_t i = 0; i < rep.modes.size() && rep.pass; ++i) {
    const double j = rep.modes[i];
    if (j == 0.0) continue;
    const double ratio = rep.mu1[i] / (j * j);
    if (ratio < rep.c1_est || ratio > 2.0 * rep.c2_est) rep.pass = false;
  }
  return rep;
}

DecayReport mode_resolvent_decay(const ModelSurface& model, cplx sigma, double cutoff_radius, int j_lo, int j_hi,
                                 const DecayOptions& opt) {
  if (j_hi < j_lo || j_lo < 1) throw Error(ErrorKind::invalid_parameter, "decay fit needs 1 <= j_lo <= j_hi");
  if (!(cutoff_radius > 0.0 && cutoff_radius < opt.box)) {
    throw Error(ErrorKind::invalid_parameter, "cutoff radius must lie inside the box");
  }
  const cplx z = model.spectral_value(sigma);
  const Discretization d = model.domain() == RadialDomain::half_line_with_pole
                               ? Discretization::half_line(Scheme::finite_difference_2nd, opt.n, opt.box, opt.r_min)
                               : Discretization::full_line(Scheme::finite_difference_2nd, opt.n, opt.box);
  const GridGeometry g = grid_geometry(d, identity_contour());
  std::vector<Eigen::Index> support;
  std::vector<double> chi;
  for (std::size_t i = 0; i < g.t.size(); ++i) {
    const double c = 1.0 - smoothstep(std::abs(g.t[i]) / cutoff_radius);
    if (c > 0.0) {
      support.push_back(static_cast<Eigen::Index>(i));
      chi.push_back(c);
    }
  }
  const auto m = static_cast<Eigen::Index>(support.size());

  DecayReport rep;
  for (int j = j_lo; j <= j_hi; ++j) rep.modes.push_back(j);
  rep.norms.resize(rep.modes.size());
  for_each_index(rep.modes.size(), [&](std::size_t idx) {
    CMatrix a = discretize(mode_operator(model, rep.modes[idx]), d);
    a.diagonal().array() -= z;
    CMatrix rhs = CMatrix::Zero(a.rows(), m);
    for (Eigen::Index c = 0; c < m; ++c) rhs(support[static_cast<std::size_t>(c)], c) = chi[static_cast<std::size_t>(c)];
    const CMatrix x = a.partialPivLu().solve(rhs);
    CMatrix comp(m, m);
    for (Eigen::Index r = 0; r < m; ++r) comp.row(r) = chi[static_cast<std::size_t>(r)] * x.row(support[static_cast<std::size_t>(r)]);
    rep.norms[idx] = norm2(comp);
  });

  // Least squares on the upper half of the range.
  const std::size_t first = rep.modes.size() / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double cnt = 0;
  for (std::size_t i = first; i < rep.modes.size(); ++i) {
    const double x = std::log(static_cast<double>(rep.modes[i]));
    const double y = std::log(rep.norms[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    cnt += 1.0;
  }
  const double den = cnt * sxx - sx * sx;
  rep.slope = den > 0.0 ? (cnt * sxy - sx * sy) / den : 0.0;
  for (std::size_t i = 0; i < rep.modes.size(); ++i) {
    const double j = rep.modes[i];
    const double wv = (1.0 + j * j) * rep.norms[i];
    if (wv > rep.weighted_sup) {
      rep.weighted_sup = wv;
      rep.weighted_argmax = rep.modes[i];
    }
  }
  return rep;
}

}  // namespace isores
