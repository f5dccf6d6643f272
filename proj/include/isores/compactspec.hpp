#pragma once

// Dirichlet spectra of the mode operators on compact caps r in [0, R], and the
// mode-resolvent compression norms on the hyperbolic plane.

#include <string>
#include <vector>

#include "isores/models.hpp"
#include "isores/types.hpp"

namespace isores {

enum class CapWarp { flat, hyperbolic };

struct CapModel {
  CapWarp warp = CapWarp::flat;
  double radius = 1.0;
  /// Blend f to the constant f(R - w/2) over [R - w, R - w/2] with a C-infinity
  /// transition, so that f' = 0
  /// on the outer half of the collar.
  bool collar = false;
  double collar_width = 0.25;

  /// f, f', f'' of the (possibly collared) warp at r.
  WarpValues warp_values(double r) const;
};

/// Lowest `count` Dirichlet eigenvalues of the conjugated mode-j operator on
/// the cap (regular pole at 0, Dirichlet at R), computed with n folded
/// Chebyshev nodes. Throws refinement_failure when mu_1 moves by more than 1e-6
/// relative between n and 2n nodes.
std::vector<double> dirichlet_mode_spectrum(const CapModel& cap, int j, int count, int n = 48);

struct WeylReport {
  std::vector<int> modes;
  std::vector<double> mu1;
  double c1_est = 0.0;  // min mu_1(j) / j^2 over |j| >= 1 (NaN when no such j)
  double c2_est = 0.0;  // max mu_1(j) / (1 + j^2)
  bool pass = false;
  std::string note;
};

WeylReport weyl_bound_check(const CapModel& cap, int j_lo, int j_hi, int n = 48);

struct DecayReport {
  std::vector<int> modes;
  std::vector<double> norms;
  double slope = 0.0;          // least-squares slope of log norm vs log j over the upper half of the range
  double weighted_sup = 0.0;   // max (1 + j^2) norm
  int weighted_argmax = 0;
};

struct DecayOptions {
  int n = 1200;         // finite-difference nodes on [r_min, box]
  double box = 16.0;
  double r_min = 1e-6;
};

/// For each j, the largest singular value of chi (A_j - z)^{-1} chi on the grid,
/// chi(r) = 1 - smoothstep(r / cutoff_radius), z = spectral_value(sigma).
DecayReport mode_resolvent_decay(const ModelSurface& model, cplx sigma, double cutoff_radius, int j_lo, int j_hi,
                                 const DecayOptions& opt = {});

}  // namespace isores
