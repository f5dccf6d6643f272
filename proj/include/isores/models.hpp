#pragma once

// Surfaces of revolution dr^2 + f(r)^2 dtheta^2 and their per-mode radial
// Schrodinger operators. Conjugating the mode-j Laplacian by f^{1/2} gives
//
//   -w'' + W_j w,   W_j = q + omega_j^2 / f^2,   q = f''/(2f) - (f'/f)^2 / 4,
//
// with omega_j = j, or 2 pi j / l on the hyperbolic cylinder of circumference l.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "isores/types.hpp"

namespace isores {

enum class ModelKind { catenoid, hyperbolic_plane, euclidean_plane, hyperbolic_cylinder };
enum class RadialDomain { half_line_with_pole, full_line };
// z = sigma, z = sigma (1 - sigma), z = sigma^2.
enum class SpectralMap { identity, hyperbolic, square };

std::string_view to_string(ModelKind kind);
std::optional<ModelKind> parse_model_kind(std::string_view name);

struct WarpValues {
  cplx f;
  cplx df;
  cplx d2f;
};

struct OracleEntry {
  cplx sigma;
  int multiplicity = 1;
};

class ModelSurface {
 public:
  ModelKind kind() const { return kind_; }
  std::string_view name() const { return to_string(kind_); }
  /// Catenoid neck a, cylinder circumference l; 0 for the parameter-free models.
  double parameter() const { return parameter_; }
  RadialDomain domain() const { return domain_; }
  SpectralMap spectral_map() const { return map_; }

  /// f, f', f'' at real or complex r (analytic continuation of the warp).
  WarpValues warp(cplx r) const;
  /// x = 1/|r| (catenoid, Euclidean plane), x = e^{-|r|} (hyperbolic models).
  double boundary_coordinate(double r) const;
  cplx spectral_value(cplx sigma) const;
  double angular_frequency(int j) const;

  /// Largest contour rotation angle for which warp and mode potentials are
  /// continued along r = t e^{-i phi}. Zero means complex scaling is unsupported.
  double sector_half_angle() const;
  bool in_sector(cplx r) const;

  bool has_oracle() const;
  /// Exact resonances of mode j inside region (sigma coordinate). Throws when the
  /// model has no oracle.
  std::vector<OracleEntry> oracle(int j, const Rect& region) const;

 private:
  friend ModelSurface make_model(ModelKind kind, std::span<const double> params);
  ModelSurface(ModelKind kind, double parameter, RadialDomain domain, SpectralMap map)
      : kind_(kind), parameter_(parameter), domain_(domain), map_(map) {}

  ModelKind kind_;
  double parameter_;
  RadialDomain domain_;
  SpectralMap map_;
};

/// params: {a} for the catenoid (a != 0), {l} for the hyperbolic cylinder (l > 0),
/// empty for the hyperbolic and Euclidean planes.
ModelSurface make_model(ModelKind kind, std::span<const double> params = {});

inline ModelSurface catenoid(double a) { return make_model(ModelKind::catenoid, std::span<const double>(&a, 1)); }
inline ModelSurface hyperbolic_plane() { return make_model(ModelKind::hyperbolic_plane); }
inline ModelSurface euclidean_plane() { return make_model(ModelKind::euclidean_plane); }
inline ModelSurface hyperbolic_cylinder(double ell) {
  return make_model(ModelKind::hyperbolic_cylinder, std::span<const double>(&ell, 1));
}

/// Conjugated potential computed from warp values by the general formula.
cplx conjugated_potential(const WarpValues& w, double omega);

enum class LeftBoundary { regular_pole, decay_at_minus_infinity };

/// W_j(r) ~ shift + inverse_square / r^2 as r -> +inf (up to exponentially small
/// terms on the hyperbolic models).
struct Asymptotics {
  double shift = 0.0;
  double inverse_square = 0.0;
};

class RadialOperator {
 public:
  using Potential = std::function<cplx(cplx)>;

  RadialOperator(ModelSurface model, int mode, double omega, LeftBoundary left, Asymptotics asym,
                 Potential potential, cplx pole_constant = 0.0)
      : model_(model), mode_(mode), omega_(omega), left_(left), asym_(asym),
        potential_(std::move(potential)), pole_constant_(pole_constant) {}

  const ModelSurface& model() const { return model_; }
  int mode() const { return mode_; }
  double angular_frequency() const { return omega_; }
  LeftBoundary left_bc() const { return left_; }
  double spectral_shift() const { return asym_.shift; }
  const Asymptotics& asymptotics() const { return asym_; }

  cplx potential(cplx r) const { return potential_(r); }
  const Potential& potential_fn() const { return potential_; }

  /// Regular-pole exponent nu: the regular solution behaves like r^{nu + 1/2}.
  double pole_index() const { return std::abs(omega_); }
  /// Constant term of W_j - (nu^2 - 1/4)/r^2 at r = 0 (regular-pole models only).
  cplx pole_constant() const { return pole_constant_; }

 private:
  ModelSurface model_;
  int mode_;
  double omega_;
  LeftBoundary left_;
  Asymptotics asym_;
  Potential potential_;
  cplx pole_constant_;
};

RadialOperator mode_operator(const ModelSurface& model, int j);

}  // namespace isores
