#pragma once

// Experiment configuration: a single versioned JSON document. Every block is
// merged onto documented defaults before validation, and the resolved document
// is what gets hashed and embedded in the outputs.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "isores/compactspec.hpp"
#include "isores/grid.hpp"
#include "isores/models.hpp"
#include "isores/potentials.hpp"
#include "isores/types.hpp"

namespace isores {

inline constexpr int schema_version = 1;
inline constexpr const char* tool_version = "0.1.0";

enum class Experiment {
  free_resonances,
  isoresonance,
  counterexample,
  persistence,
  order_growth,
  weyl_bounds,
  mode_decay,
  determinant_scan,
  sphere_shift,
};

std::string_view to_string(Experiment e);

struct ComponentConfig {
  int weight = 1;
  ProfileSpec profile;
};

struct PotentialConfig {
  std::string family = "none";  // none | geometric_catenoid | components
  double rho = 0.5;
  double neck = 1.0;
  int explicit_terms = 16;
  std::vector<ComponentConfig> components;
  std::optional<int> max_weight;  // truncate to |m| <= max_weight
  double r_cut = 0.0;             // 0 means no radial cutoff
  bool symmetrize = false;

  PotentialSum build() const;
};

struct NumericsConfig {
  int j_min = -3;
  int j_max = 3;
  Rect region{-3.5, 0.5, -0.5, 0.5};
  std::vector<double> thetas{0.3, 0.4};
  std::vector<int> ns{300, 500};
  double inner_radius = 3.0;
  double ramp_end = 12.0;
  double epsilon = 0.6;
  double box = 25.0;
  Scheme scheme = Scheme::chebyshev_collocation;
  double stability_tol = 1e-6;
  double tolerance = 1e-8;
  double match_radius = 0.5;
  double jost_tol = 1e-10;
  double break_threshold = 1e-4;  // counterexample: displacement that counts as broken isoresonance
  double ray_min = 0.5;           // modulus window for continuum Ritz values
  double ray_max = 50.0;
  double ray_tol = 0.05;
  int ray_mode = 0;               // mode whose plane-wave Ritz values are checked against the ray
  std::vector<double> t_grid{0.0, 0.25, 0.5, 0.75, 1.0};
  int fd_n = 400;
  double fd_box = 20.0;
  int mode_a = -1;
  cplx target{0.0, 0.0};
  cplx sigma{2.0, 0.0};
  double cutoff_radius = 3.0;
  int decay_n = 1200;
  double decay_box = 16.0;
  std::vector<int> p_orders{1, 2, 3};
  int samples = 20;
  int contours = 5;
  std::vector<int> k_list{1, 2, 3};
  int l_max = 8;
  CapModel cap;
  int cap_n = 48;
  std::uint64_t seed = 20240611;
};

struct OutputConfig {
  std::string prefix = "results";
  bool csv = true;
  bool json = true;
  bool svg = false;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::free_resonances;
  ModelKind model = ModelKind::hyperbolic_plane;
  double model_parameter = 0.0;  // catenoid neck or cylinder length
  PotentialConfig potential;
  NumericsConfig numerics;
  OutputConfig output;
  nlohmann::json resolved;  // defaults merged with the input

  ModelSurface surface() const;
};

/// Documented defaults for every block.
nlohmann::json default_config();

/// Throws Error(config) with a field path ("numerics.thetas[1]: ...") on any
/// unknown key, missing required field, wrong type or out-of-range value.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

/// FNV-1a 64 of the compact dump of the resolved document.
std::uint64_t config_hash(const nlohmann::json& resolved);

}  // namespace isores
