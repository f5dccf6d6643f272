#pragma once

// Angular-weight components V_m(r) e^{i m alpha} and their finite sums. A sum
// whose weights share one sign is a shift potential: multiplication by it maps
// mode j only into modes j + m on one side of j.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "isores/types.hpp"

namespace isores {

struct BumpProfile {
  double center = 0.0;
  double width = 1.0;  // support is [center - width, center + width]
  double amplitude = 1.0;
};

/// amplitude / (1 + r^2)^{power/2}; analytic for |arg r| < pi/2.
struct RationalDecayProfile {
  double amplitude = 1.0;
  double power = 2.0;
};

/// x rho^{|m|-1} with the regularized boundary coordinate x = 1/sqrt(r^2 + a^2),
/// the weight-m term of x e^{i alpha} / (1 - rho e^{i alpha}) on the catenoid.
struct GeometricCatenoidProfile {
  double rho = 0.5;
  double neck = 1.0;
};

using ProfileSpec = std::variant<BumpProfile, RationalDecayProfile, GeometricCatenoidProfile>;

class ModePotential {
 public:
  using Profile = std::function<cplx(cplx)>;

  ModePotential(int weight, Profile profile, double sup_norm, double support_radius, bool continuable,
                std::string label);

  int weight() const { return weight_; }
  double sup_norm() const { return sup_norm_; }
  /// Profile vanishes for |r| > support_radius (infinity when not compactly supported).
  double support_radius() const { return support_; }
  bool continuable() const { return continuable_; }
  const std::string& label() const { return label_; }

  /// V_m at a real or complex point. A non-continuable profile throws
  /// continuation_domain when asked for a genuinely complex point inside its support.
  cplx operator()(cplx r) const;

  ModePotential scaled(cplx factor) const;
  /// Multiplies by the radial cutoff: 1 on [0, r_cut], 0 beyond 2 r_cut.
  ModePotential cut_off(double r_cut) const;
  /// Weight -m with the Schwarz-reflected profile conj(V(conj r)).
  ModePotential reflected() const;
  /// Same weight, profiles added.
  ModePotential plus(const ModePotential& other) const;

 private:
  int weight_;
  Profile profile_;
  double sup_norm_;
  double support_;
  bool continuable_;
  std::string label_;
};

/// Throws invalid_parameter for m = 0: invariant components are not shifts.
ModePotential homogeneous_component(int m, const ProfileSpec& spec);

/// The geometric family continues past the explicit components: weights
/// m >= first_weight with profile x rho^{m-1} (and their reflections when
/// symmetric). Scale multiplies every tail term.
struct GeometricTail {
  double rho = 0.5;
  double neck = 1.0;
  int first_weight = 1;
  bool symmetric = false;
  double scale = 1.0;
  double cutoff = std::numeric_limits<double>::infinity();

  double x_max() const { return 1.0 / std::abs(neck); }
  double sup_norm_sum() const;
};

class PotentialSum {
 public:
  PotentialSum() = default;

  const std::vector<ModePotential>& components() const { return components_; }
  const std::optional<GeometricTail>& tail() const { return tail_; }
  bool empty() const { return components_.empty() && !tail_; }

  /// Sum of component sup norms, including the analytic tail of an untruncated family.
  double summability() const;
  bool one_signed() const;
  /// Sup-norm bound of everything a truncation removed (0 for an untouched sum).
  double truncation_tail_bound() const { return dropped_bound_; }

  std::vector<int> weights() const;
  /// sum_m V_m(r) e^{i m alpha} over the explicit components and the tail.
  cplx angular_value(double r, double alpha) const;

  /// Explicit components plus tail terms materialized up to |weight| <= max_weight.
  std::vector<ModePotential> materialized(int max_weight) const;

 private:
  friend PotentialSum potential_sum(std::vector<ModePotential> components);
  friend PotentialSum geometric_catenoid_family(double rho, double neck, int explicit_terms);
  friend PotentialSum truncate(const PotentialSum& v, int max_weight, double r_cut);
  friend PotentialSum symmetrize(const PotentialSum& v);
  friend PotentialSum scaled(const PotentialSum& v, double t);

  std::vector<ModePotential> components_;  // sorted by weight, one per weight
  std::optional<GeometricTail> tail_;
  double dropped_bound_ = 0.0;
};

/// Merges duplicate weights by adding profiles.
PotentialSum potential_sum(std::vector<ModePotential> components);

/// x e^{i alpha} / (1 - rho e^{i alpha}) = x sum_{m >= 1} rho^{m-1} e^{i m alpha},
/// with explicit_terms components materialized and the rest kept in closed form.
PotentialSum geometric_catenoid_family(double rho, double neck = 1.0, int explicit_terms = 16);

/// Keeps |m| <= max_weight and multiplies by the cutoff at r_cut (infinity: none).
PotentialSum truncate(const PotentialSum& v, int max_weight, double r_cut);

/// Adds the reflected (-m, conj V_m) for every component: a real potential
/// 2 Re(V_m e^{i m alpha}).
PotentialSum symmetrize(const PotentialSum& v);

PotentialSum scaled(const PotentialSum& v, double t);

/// sum over weights of max_i |A_m(r_i) - B_m(r_i)| on the grid, including
/// closed-form tails (materialized until their remainder is below 1e-17).
double sup_grid_distance(const PotentialSum& a, const PotentialSum& b, std::span<const double> grid);

/// 1 on [0, r_cut], 0 beyond 2 r_cut, C^2 quintic in between.
double radial_cutoff(double r, double r_cut);

}  // namespace isores
