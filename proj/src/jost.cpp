#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "isores/error.hpp"
#include "isores/parallel.hpp"
#include "isores/resonances.hpp"

namespace isores {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<cplx, 2>;

// Lanczos (g = 7, n = 9) with reflection; exactly zero at the poles of Gamma.
cplx rgamma(cplx z) {
  static constexpr double g = 7.0;
  static constexpr double p[] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                 771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                 -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z.real() < 0.5) {
    // 1/Gamma(z) = sin(pi z) Gamma(1 - z) / pi
    const cplx s = std::sin(pi * z) / pi;
    if (s == 0.0) return 0.0;
    return s / rgamma(1.0 - z);
  }
  const cplx zz = z - 1.0;
  cplx x = p[0];
  for (int i = 1; i < 9; ++i) x += p[i] / (zz + static_cast<double>(i));
  const cplx t = zz + g + 0.5;
  return 1.0 / (std::sqrt(2.0 * pi) * std::pow(t, zz + 0.5) * std::exp(-t) * x);
}

struct Series {
  cplx w;
  cplx dw;
};

// Outgoing solution w = e^{-kappa r} sum_k e_k x^k, x = e^{-2r}, for
// w'' = (kappa^2 + A * 4 sum_m s_m m x^m) w with s_m = 1 (plane) or (-1)^{m+1}
// (cylinder), normalized by e_0 = 1/Gamma(kappa + 1).
Series outgoing_series(cplx kappa, double amp, bool alternating, double r) {
  if (std::abs(kappa.real()) * r > 650.0) {
    throw Error(ErrorKind::overflow, "outgoing solution exceeds double range at r = " + std::to_string(r));
  }
  const double x = std::exp(-2.0 * r);
  std::vector<cplx> e{rgamma(kappa + 1.0)};
  cplx sum = e[0];
  cplx dsum = -kappa * e[0];
  double xk = 1.0;
  for (int k = 1; k < 4000; ++k) {
    cplx acc = 0.0;
    for (int m = 1; m <= k; ++m) {
      const double s = (alternating && m % 2 == 0) ? -1.0 : 1.0;
      acc += s * static_cast<double>(m) * e[static_cast<std::size_t>(k - m)];
    }
    e.push_back(amp * acc / (static_cast<double>(k) * (kappa + static_cast<double>(k))));
    xk *= x;
    const cplx term = e.back() * xk;
    sum += term;
    dsum += -(kappa + 2.0 * static_cast<double>(k)) * term;
    const double size = std::abs(sum) + std::abs(e[0]) + 1e-300;
    if (k > 8 && std::abs(term) < 1e-18 * size) {
      const cplx ph = std::exp(-kappa * r);
      return {sum * ph, dsum * ph};
    }
  }
  throw Error(ErrorKind::non_convergence, "outgoing series did not converge");
}

State integrate(const RadialOperator& op, cplx z, State y, double from, double to, double tol) {
  auto rhs = [&op, z](const State& s, State& ds, double r) {
    ds[0] = s[1];
    ds[1] = (op.potential(cplx(r, 0.0)) - z) * s[0];
  };
  auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_dopri5<State, double, State, double>());
  const double dt = (to > from ? 1.0 : -1.0) * 1e-3;
  odeint::integrate_adaptive(stepper, rhs, y, from, to, dt);
  return y;
}

struct ZeroOnContour {};

// Keeps the argument increment between samples small by bisecting edges.
double arg_increment(const std::function<cplx(cplx)>& f, cplx s1, cplx f1, cplx s2, cplx f2, int depth) {
  const double d = std::arg(f2 / f1);
  if (std::abs(d) < 0.4) return d;
  if (depth > 16) throw ZeroOnContour{};
  const cplx sm = 0.5 * (s1 + s2);
  const cplx fm = f(sm);
  if (fm == 0.0) throw ZeroOnContour{};
  return arg_increment(f, s1, f1, sm, fm, depth + 1) + arg_increment(f, sm, fm, s2, f2, depth + 1);
}

int winding(const std::function<cplx(cplx)>& f, const Rect& r) {
  const cplx corners[] = {{r.re_min, r.im_min}, {r.re_max, r.im_min}, {r.re_max, r.im_max}, {r.re_min, r.im_max}};
  constexpr int per_edge = 24;
  std::vector<cplx> pts;
  for (int e = 0; e < 4; ++e) {
    for (int i = 0; i < per_edge; ++i) {
      pts.push_back(corners[e] + (corners[(e + 1) % 4] - corners[e]) * (static_cast<double>(i) / per_edge));
    }
  }
  std::vector<cplx> vals(pts.size());
  for_each_index(pts.size(), [&](std::size_t i) { vals[i] = f(pts[i]); });
  double scale = 0.0;
  for (const cplx& v : vals) scale = std::max(scale, std::abs(v));
  for (const cplx& v : vals) {
    if (std::abs(v) <= 1e-13 * scale) throw ZeroOnContour{};
  }
  double total = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::size_t k = (i + 1) % pts.size();
    total += arg_increment(f, pts[i], vals[i], pts[k], vals[k], 0);
  }
  const double w = total / (2.0 * pi);
  const double rounded = std::round(w);
  if (std::abs(w - rounded) > 0.1) {
    throw Error(ErrorKind::non_integer_winding, "winding " + std::to_string(w) + " is not an integer");
  }
  return static_cast<int>(rounded);
}

Rect dilated(const Rect& r, double factor) {
  const cplx c = r.center();
  const double hw = 0.5 * r.width() * factor;
  const double hh = 0.5 * r.height() * factor;
  return {c.real() - hw, c.real() + hw, c.imag() - hh, c.imag() + hh};
}

cplx polish(const std::function<cplx(cplx)>& f, cplx s, int mult, double tol) {
  for (int it = 0; it < 60; ++it) {
    const double h = 1e-5 * std::max(1.0, std::abs(s));
    const cplx fs = f(s);
    if (fs == 0.0) return s;
    const cplx df = (f(s + h) - f(s - h)) / (2.0 * h);
    if (df == 0.0) break;
    const cplx step = static_cast<double>(mult) * fs / df;
    s -= step;
    if (std::abs(step) < tol * std::max(1.0, std::abs(s))) return s;
  }
  throw Error(ErrorKind::non_convergence, "Newton polish did not converge");
}

// Zero count and mean of the zeros inside a circle from the moments of f'/f
// (trapezoid rule, central-difference derivative).
std::pair<double, cplx> zero_moments(const std::function<cplx(cplx)>& f, cplx c, double radius) {
  constexpr int q = 64;
  const double h = 1e-4 * radius;
  std::vector<cplx> terms(q);
  std::vector<cplx> moments(q);
  for_each_index(q, [&](std::size_t k) {
    const cplx e = std::polar(1.0, 2.0 * pi * static_cast<double>(k) / q);
    const cplx s = c + radius * e;
    const cplx ratio = (f(s + h) - f(s - h)) / (2.0 * h * f(s));
    // (1/2 pi i) oint g ds with ds = i r e dphi
    terms[k] = ratio * radius * e / static_cast<double>(q);
    moments[k] = terms[k] * s;
  });
  cplx n = 0.0;
  cplx m = 0.0;
  for (int k = 0; k < q; ++k) {
    n += terms[static_cast<std::size_t>(k)];
    m += moments[static_cast<std::size_t>(k)];
  }
  return {n.real(), m};
}

void locate(const std::function<cplx(cplx)>& f, const Rect& r, int w, double tol, int depth,
            std::vector<ResonanceEntry>& out) {
  if (w == 0) return;
  const double size = std::max(r.width(), r.height());
  if (w == 1 && size < 0.3) {
    try {
      const cplx z = polish(f, r.center(), 1, tol);
      if (r.contains(z)) {
        out.push_back({z, 1, 1, std::nullopt, std::nullopt});
        return;
      }
    } catch (const Error&) {
    }
  }
  // Newton stalls at the noise floor of a multiple zero; zeros closer than
  // 0.02 are reported as one multiple zero at their mean.
  if (w > 1 && size < 0.02) {
    // The widest circle holding exactly these zeros keeps |f| far above its noise.
    for (double radius : {0.25, 0.1, 0.75 * size}) {
      const auto [count, moment] = zero_moments(f, r.center(), radius);
      if (std::abs(count - w) < 0.1) {
        out.push_back({moment / static_cast<double>(w), w, 1, std::nullopt, std::nullopt});
        return;
      }
    }
  }
  if (depth > 40) throw Error(ErrorKind::refinement_failure, "zero localization did not terminate");
  // Off-center splits keep lattice points (integers, half-integers) off the new edges.
  for (double frac : {0.4871, 0.5237, 0.4613, 0.5519, 0.4409}) {
    const double xm = r.re_min + frac * r.width();
    const double ym = r.im_min + frac * r.height();
    const Rect quads[] = {{r.re_min, xm, r.im_min, ym},
                          {xm, r.re_max, r.im_min, ym},
                          {r.re_min, xm, ym, r.im_max},
                          {xm, r.re_max, ym, r.im_max}};
    int ws[4];
    try {
      int sum = 0;
      for (int q = 0; q < 4; ++q) sum += ws[q] = winding(f, quads[q]);
      if (sum != w) continue;
    } catch (const ZeroOnContour&) {
      continue;
    }
    for (int q = 0; q < 4; ++q) locate(f, quads[q], ws[q], tol, depth + 1, out);
    return;
  }
  throw Error(ErrorKind::refinement_failure, "could not split a rectangle around a zero cluster");
}

}  // namespace

cplx jost_function(const ModelSurface& model, int j, cplx sigma, const JostOptions& opt) {
  const bool plane = model.kind() == ModelKind::hyperbolic_plane;
  if (!plane && model.kind() != ModelKind::hyperbolic_cylinder) {
    throw Error(ErrorKind::invalid_parameter, "the Jost route needs a hyperbolic model");
  }
  if (!(opt.r_start >= opt.r_match && opt.r_match > opt.r_min && opt.r_min > 0.0)) {
    throw Error(ErrorKind::invalid_parameter, "Jost radii must satisfy 0 < r_min < r_match <= r_start");
  }
  const RadialOperator op = mode_operator(model, j);
  const double omega = op.angular_frequency();
  cplx kappa = sigma - 0.5;
  // At kappa = -k the normalization and the recursion pole cancel; a tiny nudge
  // avoids evaluating 0/0 there.
  const double nearest = std::round(-kappa.real());
  if (nearest >= 1.0 && std::abs(kappa + nearest) < 1e-9) kappa += 1e-9;
  const cplx z = 0.25 - kappa * kappa;  // sigma (1 - sigma)

  const double amp = plane ? omega * omega - 0.25 : omega * omega + 0.25;
  const Series s = outgoing_series(kappa, amp, !plane, opt.r_start);
  State out{s.w, s.dw};

  if (plane) {
    out = integrate(op, z, out, opt.r_start, opt.r_match, opt.ode_tol);
    const double nu = std::abs(omega);
    const double r0 = opt.r_min;
    const cplx a1 = (op.pole_constant() - z) / (4.0 * (nu + 1.0));
    State reg{std::pow(r0, nu + 0.5) * (1.0 + a1 * r0 * r0),
              (nu + 0.5) * std::pow(r0, nu - 0.5) + a1 * (nu + 2.5) * std::pow(r0, nu + 1.5)};
    reg = integrate(op, z, reg, r0, opt.r_match, opt.ode_tol);
    return reg[0] * out[1] - reg[1] * out[0];
  }
  // Even potential: the left outgoing solution is w(-r), so the Wronskian at 0 is 2 w(0) w'(0).
  out = integrate(op, z, out, opt.r_start, 0.0, opt.ode_tol);
  return 2.0 * out[0] * out[1];
}

int jost_winding(const ModelSurface& model, int j, const Rect& rect, const JostOptions& opt) {
  const std::function<cplx(cplx)> f = [&](cplx s) { return jost_function(model, j, s, opt); };
  try {
    return winding(f, rect);
  } catch (const ZeroOnContour&) {
    throw Error(ErrorKind::eigenvalue_on_contour, "a(sigma) vanishes on the rectangle boundary");
  }
}

ResonanceSet find_resonances_jost(const ModelSurface& model, int j, const Rect& region, double tol,
                                  const JostOptions& opt) {
  const std::function<cplx(cplx)> f = [&](cplx s) { return jost_function(model, j, s, opt); };
  Rect work = region;
  int w = 0;
  bool ok = false;
  for (int attempt = 0; attempt < 4 && !ok; ++attempt) {
    try {
      w = winding(f, work);
      ok = true;
    } catch (const ZeroOnContour&) {
      work = dilated(work, 1.03);
    }
  }
  if (!ok) throw Error(ErrorKind::eigenvalue_on_contour, "a(sigma) keeps vanishing on the dilated boundary");

  std::vector<ResonanceEntry> found;
  locate(f, work, w, tol, 0, found);

  ResonanceSet out;
  out.model = std::string(model.name());
  out.route = "jost";
  out.j_min = out.j_max = j;
  const Rect keep = dilated(region, 1.0 + 1e-9);
  for (auto& e : found) {
    if (!keep.contains(e.sigma)) continue;
    e.mode = j;
    out.entries.push_back(e);
  }
  return merge_sets({out}, 1e-7);
}

}  // namespace isores
