#pragma once

// Exterior complex scaling contours r(t) = t exp(-i phi(|t|)) on the real
// parameter t. phi vanishes on the core |t| <= R0, equals theta for |t| >= R1 and
// ramps in between by a C^2 quintic in log|t|. In the boundary coordinate
// x = 1/r the deformed end reads x = s e^{i phi}, so the rotated continuum of
// the scaled operator sits on e^{2 i theta} R^+.

#include <vector>

#include "isores/models.hpp"
#include "isores/types.hpp"

namespace isores {

struct ContourCertificate {
  int samples = 0;
  double max_violation = 0.0;
  /// Largest sampled arg(x) - arg(x'), the slack the epsilon constraint bounds.
  double max_turning = 0.0;
};

class ScalingContour {
 public:
  double theta() const { return theta_; }
  double inner_radius() const { return r0_; }
  double ramp_end() const { return r1_; }
  double epsilon() const { return eps_; }
  bool is_identity() const { return theta_ == 0.0; }

  /// Deformation angle phi(s) for s = |t|, and its derivative.
  double angle(double s) const;
  double angle_derivative(double s) const;

  cplx point(double t) const;
  cplx derivative(double t) const;

  /// Points where the parameterization is only C^2 (+-R0, +-R1).
  std::vector<double> kinks() const;

  const ContourCertificate& certificate() const { return cert_; }

  /// Sampled constraint report for the parameterization on (0, t_max].
  ContourCertificate verify(double t_max, int samples) const;

 private:
  friend ScalingContour build_contour(double theta, double r0, double r1, double epsilon);
  ScalingContour(double theta, double r0, double r1, double eps) : theta_(theta), r0_(r0), r1_(r1), eps_(eps) {}

  double theta_;
  double r0_;
  double r1_;
  double eps_;
  ContourCertificate cert_;
};

/// Builds and certifies a contour. With x = 1/r and the angles measured along the
/// x-parameterization, every sample must satisfy arg x >= 0,
/// 0 <= arg x - arg x' <= epsilon and 0 <= 2 arg x - arg x' <= theta + epsilon.
/// Throws constraint_infeasible when the ramp on [R0, R1] is too steep.
ScalingContour build_contour(double theta, double r0, double r1, double epsilon);

/// The mode operator pulled back to the contour:
///   -(1/r') d/dt ((1/r') d/dt w) + W_j(r(t)) w.
class ScaledOperator {
 public:
  ScaledOperator(RadialOperator op, ScalingContour contour);

  const RadialOperator& base() const { return op_; }
  const ScalingContour& contour() const { return contour_; }

  cplx r(double t) const { return contour_.point(t); }
  cplx inv_dr(double t) const { return 1.0 / contour_.derivative(t); }
  cplx potential(double t) const { return op_.potential(contour_.point(t)); }

 private:
  RadialOperator op_;
  ScalingContour contour_;
};

/// Throws continuation_domain when the model's warp cannot be continued to the
/// contour's rotation angle.
ScaledOperator scaled_operator(const RadialOperator& op, const ScalingContour& contour);

/// The undeformed contour (theta = 0) used for unscaled discretizations.
ScalingContour identity_contour();

}  // namespace isores
