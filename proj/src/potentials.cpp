#include "isores/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "isores/error.hpp"

namespace isores {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

bool is_complex_point(cplx r) { return r.imag() != 0.0; }

// Weight-m term of the geometric family, scaled; cutoff applied separately.
cplx geometric_term(cplx r, double rho, double neck, int m) {
  return std::pow(rho, std::abs(m) - 1) / std::sqrt(r * r + neck * neck);
}

int tail_last_weight(const GeometricTail& t, double remainder) {
  // smallest K with scale x_max rho^K / (1 - rho) < remainder
  if (t.rho == 0.0) return t.first_weight;
  const double bound = std::abs(t.scale) * t.x_max() / (1.0 - t.rho);
  if (bound < remainder) return t.first_weight - 1;
  const int k = static_cast<int>(std::ceil(std::log(remainder / bound) / std::log(t.rho)));
  return std::max(t.first_weight, std::min(k, 4000));
}

}  // namespace

double radial_cutoff(double r, double r_cut) {
  if (!std::isfinite(r_cut)) return 1.0;
  const double s = std::abs(r);
  return 1.0 - smoothstep((s - r_cut) / r_cut);
}

ModePotential::ModePotential(int weight, Profile profile, double sup_norm, double support_radius, bool continuable,
                             std::string label)
    : weight_(weight), profile_(std::move(profile)), sup_norm_(sup_norm), support_(support_radius),
      continuable_(continuable), label_(std::move(label)) {}

cplx ModePotential::operator()(cplx r) const {
  if (std::abs(r) > support_) return 0.0;
  if (!continuable_ && is_complex_point(r)) {
    throw Error(ErrorKind::continuation_domain,
                label_ + " is not analytic and is evaluated at complex r = (" + std::to_string(r.real()) + ", " +
                    std::to_string(r.imag()) + ") inside its support");
  }
  return profile_(r);
}

ModePotential ModePotential::scaled(cplx factor) const {
  auto p = profile_;
  return ModePotential(weight_, [p, factor](cplx r) { return factor * p(r); }, std::abs(factor) * sup_norm_,
                       factor == 0.0 ? 0.0 : support_, continuable_, label_);
}

ModePotential ModePotential::cut_off(double r_cut) const {
  if (!std::isfinite(r_cut)) return *this;
  auto p = profile_;
  // The cutoff is only C^2 in |r|, so the product is no longer continuable
  // inside its support.
  return ModePotential(
      weight_, [p, r_cut](cplx r) { return radial_cutoff(r.real(), r_cut) * p(r); }, sup_norm_,
      std::min(support_, 2.0 * r_cut), false, label_ + "*cutoff");
}

ModePotential ModePotential::reflected() const {
  auto p = profile_;
  return ModePotential(-weight_, [p](cplx r) { return std::conj(p(std::conj(r))); }, sup_norm_, support_,
                       continuable_, label_ + "~");
}

ModePotential ModePotential::plus(const ModePotential& other) const {
  if (other.weight_ != weight_) throw Error(ErrorKind::mode_mismatch, "adding profiles of different weights");
  auto a = profile_;
  auto b = other.profile_;
  const double sa = support_;
  const double sb = other.support_;
  return ModePotential(
      weight_,
      [a, b, sa, sb](cplx r) {
        const double ar = std::abs(r);
        cplx v = 0.0;
        if (ar <= sa) v += a(r);
        if (ar <= sb) v += b(r);
        return v;
      },
      sup_norm_ + other.sup_norm_, std::max(sa, sb), continuable_ && other.continuable_,
      label_ + "+" + other.label_);
}

ModePotential homogeneous_component(int m, const ProfileSpec& spec) {
  if (m == 0) {
    throw Error(ErrorKind::invalid_parameter, "weight 0 is S^1-invariant and not a shift potential");
  }
  const std::string w = "[m=" + std::to_string(m) + "]";
  if (const auto* b = std::get_if<BumpProfile>(&spec)) {
    if (!(b->width > 0.0)) throw Error(ErrorKind::invalid_parameter, "bump width must be positive");
    const double c = b->center;
    const double h = b->width;
    const double amp = b->amplitude;
    auto prof = [c, h, amp](cplx r) -> cplx {
      const double s = (r.real() - c) / h;
      if (std::abs(s) >= 1.0) return 0.0;
      return amp * std::exp(1.0 - 1.0 / (1.0 - s * s));
    };
    return ModePotential(m, prof, std::abs(amp), std::abs(c) + h, false, "bump" + w);
  }
  if (const auto* q = std::get_if<RationalDecayProfile>(&spec)) {
    if (!(q->power > 0.0)) throw Error(ErrorKind::invalid_parameter, "rational decay power must be positive");
    const double amp = q->amplitude;
    const double p = q->power;
    auto prof = [amp, p](cplx r) -> cplx { return amp * std::pow(1.0 + r * r, -0.5 * p); };
    return ModePotential(m, prof, std::abs(amp), inf, true, "rational" + w);
  }
  const auto& g = std::get<GeometricCatenoidProfile>(spec);
  if (!(g.rho > 0.0 && g.rho < 1.0)) throw Error(ErrorKind::invalid_parameter, "geometric ratio must lie in (0, 1)");
  if (g.neck == 0.0) throw Error(ErrorKind::invalid_parameter, "geometric profile needs a nonzero neck");
  const double rho = g.rho;
  const double a = g.neck;
  auto prof = [rho, a, m](cplx r) { return geometric_term(r, rho, a, m); };
  return ModePotential(m, prof, std::pow(rho, std::abs(m) - 1) / std::abs(a), inf, true, "geometric" + w);
}

double GeometricTail::sup_norm_sum() const {
  const double one_side = std::abs(scale) * x_max() * std::pow(rho, first_weight - 1) / (1.0 - rho);
  return symmetric ? 2.0 * one_side : one_side;
}

double PotentialSum::summability() const {
  double s = 0.0;
  for (const auto& c : components_) s += c.sup_norm();
  if (tail_) s += tail_->sup_norm_sum();
  return s;
}

bool PotentialSum::one_signed() const {
  bool pos = false;
  bool neg = false;
  for (const auto& c : components_) (c.weight() > 0 ? pos : neg) = true;
  if (tail_) {
    pos = true;
    if (tail_->symmetric) neg = true;
  }
  return !(pos && neg);
}

std::vector<int> PotentialSum::weights() const {
  std::vector<int> w;
  for (const auto& c : components_) w.push_back(c.weight());
  return w;
}

std::vector<ModePotential> PotentialSum::materialized(int max_weight) const {
  std::vector<ModePotential> out;
  for (const auto& c : components_) {
    if (std::abs(c.weight()) <= max_weight) out.push_back(c);
  }
  if (tail_) {
    const GeometricTail t = *tail_;
    for (int m = t.first_weight; m <= max_weight; ++m) {
      for (int sgn : {1, -1}) {
        if (sgn < 0 && !t.symmetric) continue;
        ModePotential c = homogeneous_component(sgn * m, GeometricCatenoidProfile{t.rho, t.neck});
        c = c.scaled(t.scale).cut_off(t.cutoff);
        out.push_back(std::move(c));
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.weight() < b.weight(); });
  return out;
}

cplx PotentialSum::angular_value(double r, double alpha) const {
  cplx v = 0.0;
  for (const auto& c : components_) v += c(r) * std::polar(1.0, c.weight() * alpha);
  if (tail_) {
    const GeometricTail& t = *tail_;
    // x rho^{k-1} e^{i k alpha} summed over k >= first_weight in closed form.
    const cplx e = std::polar(1.0, alpha);
    const cplx x = 1.0 / std::sqrt(cplx(r * r + t.neck * t.neck));
    const cplx head = std::pow(t.rho, t.first_weight - 1) * std::pow(e, t.first_weight);
    cplx s = x * head / (1.0 - t.rho * e);
    if (t.symmetric) s += std::conj(s);
    v += t.scale * radial_cutoff(r, t.cutoff) * s;
  }
  return v;
}

PotentialSum potential_sum(std::vector<ModePotential> components) {
  std::map<int, ModePotential> merged;
  for (auto& c : components) {
    auto it = merged.find(c.weight());
    if (it == merged.end()) {
      merged.emplace(c.weight(), std::move(c));
    } else {
      it->second = it->second.plus(c);
    }
  }
  PotentialSum out;
  for (auto& [w, c] : merged) out.components_.push_back(std::move(c));
  return out;
}

PotentialSum geometric_catenoid_family(double rho, double neck, int explicit_terms) {
  if (!(rho > 0.0 && rho < 1.0)) throw Error(ErrorKind::invalid_parameter, "geometric ratio must lie in (0, 1)");
  if (explicit_terms < 0) throw Error(ErrorKind::invalid_parameter, "explicit term count must be >= 0");
  std::vector<ModePotential> comps;
  for (int m = 1; m <= explicit_terms; ++m) comps.push_back(homogeneous_component(m, GeometricCatenoidProfile{rho, neck}));
  PotentialSum out = potential_sum(std::move(comps));
  out.tail_ = GeometricTail{rho, neck, explicit_terms + 1, false, 1.0, inf};
  return out;
}

PotentialSum truncate(const PotentialSum& v, int max_weight, double r_cut) {
  if (max_weight < 1) throw Error(ErrorKind::invalid_parameter, "truncation order M must be >= 1");
  if (!(r_cut > 0.0)) throw Error(ErrorKind::invalid_parameter, "cutoff radius must be positive");
  PotentialSum out;
  out.dropped_bound_ = v.dropped_bound_;
  for (const auto& c : v.components_) {
    if (std::abs(c.weight()) <= max_weight) {
      out.components_.push_back(c.cut_off(r_cut));
    } else {
      out.dropped_bound_ += c.sup_norm();
    }
  }
  if (v.tail_) {
    GeometricTail t = *v.tail_;
    std::vector<ModePotential> extra;
    for (int m = t.first_weight; m <= max_weight; ++m) {
      for (int sgn : {1, -1}) {
        if (sgn < 0 && !t.symmetric) continue;
        extra.push_back(homogeneous_component(sgn * m, GeometricCatenoidProfile{t.rho, t.neck})
                            .scaled(t.scale)
                            .cut_off(std::min(t.cutoff, r_cut)));
      }
    }
    t.first_weight = std::max(t.first_weight, max_weight + 1);
    out.dropped_bound_ += t.sup_norm_sum();
    for (auto& c : extra) out.components_.push_back(std::move(c));
    std::sort(out.components_.begin(), out.components_.end(),
              [](const auto& a, const auto& b) { return a.weight() < b.weight(); });
  }
  return out;
}

PotentialSum symmetrize(const PotentialSum& v) {
  std::vector<ModePotential> comps = v.components_;
  for (const auto& c : v.components_) comps.push_back(c.reflected());
  PotentialSum out = potential_sum(std::move(comps));
  out.dropped_bound_ = 2.0 * v.dropped_bound_;
  if (v.tail_) {
    out.tail_ = v.tail_;
    out.tail_->symmetric = true;
  }
  return out;
}

PotentialSum scaled(const PotentialSum& v, double t) {
  PotentialSum out;
  for (const auto& c : v.components_) out.components_.push_back(c.scaled(t));
  out.dropped_bound_ = std::abs(t) * v.dropped_bound_;
  if (v.tail_) {
    out.tail_ = v.tail_;
    out.tail_->scale *= t;
  }
  return out;
}

double sup_grid_distance(const PotentialSum& a, const PotentialSum& b, std::span<const double> grid) {
  int k = 0;
  for (const auto* s : {&a, &b}) {
    for (const auto& c : s->components()) k = std::max(k, std::abs(c.weight()));
    if (s->tail()) k = std::max(k, tail_last_weight(*s->tail(), 1e-17));
  }
  std::map<int, std::vector<const ModePotential*>> by_weight_a;
  std::map<int, std::vector<const ModePotential*>> by_weight_b;
  const auto ma = a.materialized(k);
  const auto mb = b.materialized(k);
  for (const auto& c : ma) by_weight_a[c.weight()].push_back(&c);
  for (const auto& c : mb) by_weight_b[c.weight()].push_back(&c);
  std::vector<int> weights;
  for (const auto& [w, _] : by_weight_a) weights.push_back(w);
  for (const auto& [w, _] : by_weight_b) weights.push_back(w);
  std::sort(weights.begin(), weights.end());
  weights.erase(std::unique(weights.begin(), weights.end()), weights.end());

  double total = 0.0;
  for (int w : weights) {
    double best = 0.0;
    for (double r : grid) {
      cplx d = 0.0;
      for (const auto* c : by_weight_a[w]) d += (*c)(r);
      for (const auto* c : by_weight_b[w]) d -= (*c)(r);
      best = std::max(best, std::abs(d));
    }
    total += best;
  }
  return total;
}

}  // namespace isores
