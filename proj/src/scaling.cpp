#include "isores/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "isores/error.hpp"

namespace isores {

double ScalingContour::angle(double s) const {
  if (theta_ == 0.0 || s <= r0_) return 0.0;
  if (s >= r1_) return theta_;
  return theta_ * smoothstep(std::log(s / r0_) / std::log(r1_ / r0_));
}

double ScalingContour::angle_derivative(double s) const {
  if (theta_ == 0.0 || s <= r0_ || s >= r1_) return 0.0;
  const double width = std::log(r1_ / r0_);
  return theta_ * smoothstep_d1(std::log(s / r0_) / width) / (s * width);
}

cplx ScalingContour::point(double t) const {
  if (theta_ == 0.0) return {t, 0.0};
  return t * std::polar(1.0, -angle(std::abs(t)));
}

cplx ScalingContour::derivative(double t) const {
  if (theta_ == 0.0) return {1.0, 0.0};
  const double s = std::abs(t);
  return std::polar(1.0, -angle(s)) * cplx(1.0, -s * angle_derivative(s));
}

std::vector<double> ScalingContour::kinks() const {
  if (theta_ == 0.0) return {};
  return {-r1_, -r0_, r0_, r1_};
}

ContourCertificate ScalingContour::verify(double t_max, int samples) const {
  ContourCertificate cert;
  cert.samples = samples;
  double prev_arg = 0.0;
  for (int i = 1; i <= samples; ++i) {
    const double t = t_max * static_cast<double>(i) / samples;
    // x(s) = 1 / r(1/s): dx/ds = r'(t) t^2 / r(t)^2.
    const cplx r = point(t);
    const cplx x = 1.0 / r;
    const cplx dx = derivative(t) * t * t / (r * r);
    const double arg_x = std::arg(x);
    const double turning = std::arg(x / dx);  // arg x - arg x'
    const double second = arg_x + turning;    // 2 arg x - arg x'
    double v = 0.0;
    v = std::max(v, -arg_x);
    v = std::max(v, -turning);
    v = std::max(v, turning - eps_);
    v = std::max(v, -second);
    v = std::max(v, second - theta_ - eps_);
    v = std::max(v, prev_arg - arg_x);  // phi nondecreasing in |t|
    prev_arg = arg_x;
    cert.max_violation = std::max(cert.max_violation, v);
    cert.max_turning = std::max(cert.max_turning, turning);
  }
  return cert;
}

ScalingContour build_contour(double theta, double r0, double r1, double epsilon) {
  if (!(theta >= 0.0 && theta < 0.5 * pi)) {
    throw Error(ErrorKind::invalid_parameter, "contour angle must lie in [0, pi/2)");
  }
  if (!(r0 > 0.0 && r1 > r0)) throw Error(ErrorKind::invalid_parameter, "contour needs 0 < R0 < R1");
  if (!(epsilon >= 0.0)) throw Error(ErrorKind::invalid_parameter, "contour slack epsilon must be >= 0");

  ScalingContour c(theta, r0, r1, epsilon);
  c.cert_ = c.verify(2.0 * r1, 4000);
  // Roundoff in std::arg is ~1e-16; anything above that is a genuine violation.
  if (c.cert_.max_violation > 1e-12) {
    throw Error(ErrorKind::constraint_infeasible,
                "ramp on [" + std::to_string(r0) + ", " + std::to_string(r1) + "] turns by up to " +
                    std::to_string(c.cert_.max_turning) + " rad, epsilon = " + std::to_string(epsilon));
  }
  return c;
}

ScalingContour identity_contour() { return build_contour(0.0, 1.0, 2.0, 0.0); }

ScaledOperator::ScaledOperator(RadialOperator op, ScalingContour contour)
    : op_(std::move(op)), contour_(std::move(contour)) {}

ScaledOperator scaled_operator(const RadialOperator& op, const ScalingContour& contour) {
  if (!contour.is_identity() && !(contour.theta() < op.model().sector_half_angle())) {
    throw Error(ErrorKind::continuation_domain,
                std::string(op.model().name()) + " cannot be continued to rotation angle " +
                    std::to_string(contour.theta()));
  }
  return ScaledOperator(op, contour);
}

}  // namespace isores
