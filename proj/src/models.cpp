#include "isores/models.hpp"

#include <cmath>
#include <string>

#include "isores/error.hpp"

namespace isores {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::catenoid: return "catenoid";
    case ModelKind::hyperbolic_plane: return "hyperbolic_plane";
    case ModelKind::euclidean_plane: return "euclidean_plane";
    case ModelKind::hyperbolic_cylinder: return "hyperbolic_cylinder";
  }
  return "unknown";
}

std::optional<ModelKind> parse_model_kind(std::string_view name) {
  for (auto k : {ModelKind::catenoid, ModelKind::hyperbolic_plane, ModelKind::euclidean_plane,
                 ModelKind::hyperbolic_cylinder}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

ModelSurface make_model(ModelKind kind, std::span<const double> params) {
  auto need_one = [&](const char* what) {
    if (params.size() != 1) {
      throw Error(ErrorKind::invalid_parameter,
                  std::string(to_string(kind)) + " takes exactly one parameter (" + what + ")");
    }
    if (!std::isfinite(params[0])) throw Error(ErrorKind::invalid_parameter, std::string(what) + " must be finite");
    return params[0];
  };
  switch (kind) {
    case ModelKind::catenoid: {
      const double a = need_one("neck a");
      if (a == 0.0) throw Error(ErrorKind::invalid_parameter, "catenoid neck a = 0 is degenerate");
      return ModelSurface(kind, a, RadialDomain::full_line, SpectralMap::identity);
    }
    case ModelKind::hyperbolic_cylinder: {
      const double ell = need_one("circumference l");
      if (!(ell > 0.0)) throw Error(ErrorKind::invalid_parameter, "cylinder circumference must be positive");
      return ModelSurface(kind, ell, RadialDomain::full_line, SpectralMap::hyperbolic);
    }
    case ModelKind::hyperbolic_plane:
    case ModelKind::euclidean_plane:
      if (!params.empty()) {
        throw Error(ErrorKind::invalid_parameter, std::string(to_string(kind)) + " takes no parameters");
      }
      return ModelSurface(kind, 0.0, RadialDomain::half_line_with_pole,
                          kind == ModelKind::hyperbolic_plane ? SpectralMap::hyperbolic : SpectralMap::square);
  }
  throw Error(ErrorKind::invalid_parameter, "unknown model");
}

WarpValues ModelSurface::warp(cplx r) const {
  switch (kind_) {
    case ModelKind::catenoid: {
      const double a2 = parameter_ * parameter_;
      const cplx f = std::sqrt(r * r + a2);
      return {f, r / f, a2 / (f * f * f)};
    }
    case ModelKind::hyperbolic_plane: {
      const cplx s = std::sinh(r);
      return {s, std::cosh(r), s};
    }
    case ModelKind::hyperbolic_cylinder: {
      const cplx c = std::cosh(r);
      return {c, std::sinh(r), c};
    }
    case ModelKind::euclidean_plane:
      return {r, 1.0, 0.0};
  }
  return {};
}

double ModelSurface::boundary_coordinate(double r) const {
  switch (kind_) {
    case ModelKind::catenoid:
    case ModelKind::euclidean_plane:
      return 1.0 / std::abs(r);
    case ModelKind::hyperbolic_plane:
    case ModelKind::hyperbolic_cylinder:
      return std::exp(-std::abs(r));
  }
  return 0.0;
}

cplx ModelSurface::spectral_value(cplx sigma) const {
  switch (map_) {
    case SpectralMap::identity: return sigma;
    case SpectralMap::hyperbolic: return sigma * (1.0 - sigma);
    case SpectralMap::square: return sigma * sigma;
  }
  return sigma;
}

double ModelSurface::angular_frequency(int j) const {
  if (kind_ == ModelKind::hyperbolic_cylinder) return 2.0 * pi * j / parameter_;
  return static_cast<double>(j);
}

double ModelSurface::sector_half_angle() const {
  switch (kind_) {
    case ModelKind::catenoid:
    case ModelKind::euclidean_plane:
      return 0.5 * pi;
    case ModelKind::hyperbolic_plane:
    case ModelKind::hyperbolic_cylinder:
      return 0.0;
  }
  return 0.0;
}

bool ModelSurface::in_sector(cplx r) const {
  if (r.imag() == 0.0) return true;
  const cplx oriented = r.real() < 0.0 ? -r : r;
  return std::abs(std::arg(oriented)) < sector_half_angle();
}

bool ModelSurface::has_oracle() const {
  return kind_ == ModelKind::hyperbolic_plane || kind_ == ModelKind::hyperbolic_cylinder;
}

std::vector<OracleEntry> ModelSurface::oracle(int j, const Rect& region) const {
  std::vector<OracleEntry> out;
  if (kind_ == ModelKind::hyperbolic_plane) {
    // Mode j resonates at sigma = -k for every k >= |j|, 0 included for j = 0.
    const int k_lo = std::max(std::abs(j), static_cast<int>(std::ceil(-region.re_max)));
    const int k_hi = static_cast<int>(std::floor(-region.re_min));
    for (int k = std::max(k_lo, 0); k <= k_hi; ++k) {
      const cplx s(-static_cast<double>(k), 0.0);
      if (region.contains(s)) out.push_back({s, 1});
    }
    return out;
  }
  if (kind_ == ModelKind::hyperbolic_cylinder) {
    // sigma = -n +/- i omega_j; the two branches coincide (double zero) when omega_j = 0.
    const double w = std::abs(angular_frequency(j));
    const int n_lo = std::max(0, static_cast<int>(std::ceil(-region.re_max)));
    const int n_hi = static_cast<int>(std::floor(-region.re_min));
    for (int n = n_lo; n <= n_hi; ++n) {
      if (w == 0.0) {
        const cplx s(-static_cast<double>(n), 0.0);
        if (region.contains(s)) out.push_back({s, 2});
      } else {
        for (double sgn : {-1.0, 1.0}) {
          const cplx s(-static_cast<double>(n), sgn * w);
          if (region.contains(s)) out.push_back({s, 1});
        }
      }
    }
    return out;
  }
  throw Error(ErrorKind::invalid_parameter, std::string(to_string(kind_)) + " has no resonance oracle");
}

cplx conjugated_potential(const WarpValues& w, double omega) {
  const cplx ratio1 = w.df / w.f;
  return 0.5 * w.d2f / w.f - 0.25 * ratio1 * ratio1 + omega * omega / (w.f * w.f);
}

RadialOperator mode_operator(const ModelSurface& model, int j) {
  const double omega = model.angular_frequency(j);
  const double w2 = omega * omega;
  switch (model.kind()) {
    case ModelKind::catenoid: {
      const double a2 = model.parameter() * model.parameter();
      auto pot = [a2, w2](cplx r) {
        const cplx s = r * r + a2;
        return (2.0 * a2 - r * r + 4.0 * w2 * s) / (4.0 * s * s);
      };
      return RadialOperator(model, j, omega, LeftBoundary::decay_at_minus_infinity, {0.0, w2 - 0.25}, pot);
    }
    case ModelKind::hyperbolic_plane: {
      auto pot = [w2](cplx r) {
        const cplx s = std::sinh(r);
        return 0.25 + (w2 - 0.25) / (s * s);
      };
      return RadialOperator(model, j, omega, LeftBoundary::regular_pole, {0.25, 0.0}, pot,
                            0.25 - (w2 - 0.25) / 3.0);
    }
    case ModelKind::hyperbolic_cylinder: {
      auto pot = [w2](cplx r) {
        const cplx c = std::cosh(r);
        return 0.25 + (w2 + 0.25) / (c * c);
      };
      return RadialOperator(model, j, omega, LeftBoundary::decay_at_minus_infinity, {0.25, 0.0}, pot);
    }
    case ModelKind::euclidean_plane: {
      auto pot = [w2](cplx r) { return (w2 - 0.25) / (r * r); };
      return RadialOperator(model, j, omega, LeftBoundary::regular_pole, {0.0, w2 - 0.25}, pot, 0.0);
    }
  }
  throw Error(ErrorKind::invalid_parameter, "unknown model");
}

}  // namespace isores
