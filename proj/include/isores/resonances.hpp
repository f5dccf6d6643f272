#pragma once

// Resonance finders. The scaling route diagonalizes complex-scaled block
// operators and keeps eigenvalues that are stable across contour angles and
// grid sizes. The Jost route locates zeros of the connection coefficient a(sigma)
// of the hyperbolic models with the argument principle.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "isores/grid.hpp"
#include "isores/linalg.hpp"
#include "isores/models.hpp"
#include "isores/potentials.hpp"

namespace isores {

struct ScalingDiagnostics {
  double theta_spread = 0.0;  // largest move between angles at equal n
  double n_spread = 0.0;      // largest move between grid sizes at equal angle
  std::string contour;
};

struct ResonanceEntry {
  cplx sigma;
  int multiplicity = 1;
  int order = 1;
  std::optional<int> mode;  // Jost route: the mode that carries the zero
  std::optional<ScalingDiagnostics> diagnostics;
};

struct ResonanceSet {
  std::string model;
  std::string route;
  int j_min = 0;
  int j_max = 0;
  std::vector<ResonanceEntry> entries;  // sorted by (Re sigma, Im sigma)

  int total_multiplicity() const;
};

/// Sorts entries and merges those closer than tol by adding multiplicities.
ResonanceSet merge_sets(const std::vector<ResonanceSet>& sets, double tol);

/// sigma for a spectral value z, on the branch Re sigma <= 1/2 for the hyperbolic map.
cplx sigma_from_spectral(const ModelSurface& model, cplx z);

struct ScalingOptions {
  std::vector<double> thetas{0.3, 0.4};
  std::vector<int> ns{300, 500};
  double inner_radius = 3.0;  // R0
  double ramp_end = 12.0;     // R1
  double epsilon = 0.6;
  double box = 25.0;          // truncation at |t| = box
  Scheme scheme = Scheme::chebyshev_collocation;
  double stability_tol = 1e-6;
  double ray_margin = 0.05;
  bool compute_order = true;
  double rank_tol = 1e-8;
  int projector_nodes = 64;
  std::uint64_t seed = 20240611;
};

/// Spectrum of one (theta, n) assembly, kept for diagnostics.
struct ScaledSpectrum {
  double theta = 0.0;
  int n = 0;
  std::vector<cplx> eigenvalues;
};

ScaledSpectrum scaled_spectrum(const ModelSurface& model, int j_min, int j_max, const PotentialSum& v, double theta,
                               int n, const ScalingOptions& opt);

/// Stable eigenvalues of the scaled assemblies inside region (spectral
/// coordinate z, reported as sigma). Candidates must lie below the ray
/// arg z = 2 min(theta) - ray_margin and farther than 5 stability_tol from
/// every rotated continuum ray. Multiplicity is the cluster size; order comes
/// from the Jordan structure of the finest assembly compressed to the cluster's
/// invariant subspace.
ResonanceSet find_resonances_scaling(const ModelSurface& model, int j_min, int j_max, const PotentialSum& v,
                                     const Rect& region, const ScalingOptions& opt = {});

struct JostOptions {
  double r_start = 1.5;  // outgoing series evaluated here
  double r_match = 1.0;  // Wronskian taken here
  double r_min = 1e-3;   // regular solution started here (plane)
  double ode_tol = 1e-12;
};

/// Connection coefficient a(sigma): Wronskian of the regular (plane) or the
/// mirrored outgoing (cylinder) solution with the outgoing one. The outgoing
/// solution is normalized by 1/Gamma(sigma + 1/2), which makes a entire.
cplx jost_function(const ModelSurface& model, int j, cplx sigma, const JostOptions& opt = {});

/// Zeros of a(sigma) in region by winding numbers over recursively split
/// rectangles, then Newton polish. Every zero is reported with order 1.
ResonanceSet find_resonances_jost(const ModelSurface& model, int j, const Rect& region, double tol = 1e-10,
                                  const JostOptions& opt = {});

/// Winding number of a(sigma) around the rectangle boundary.
int jost_winding(const ModelSurface& model, int j, const Rect& rect, const JostOptions& opt = {});

struct MatchPair {
  std::size_t left = 0;
  std::size_t right = 0;
  double displacement = 0.0;
};

struct MatchReport {
  std::vector<MatchPair> matched;
  std::vector<std::size_t> unmatched_left;
  std::vector<std::size_t> unmatched_right;
  double max_displacement = 0.0;
  std::vector<MatchPair> multiplicity_mismatches;

  bool identical() const {
    return unmatched_left.empty() && unmatched_right.empty() && multiplicity_mismatches.empty();
  }
};

/// Greedy nearest matching of entries closer than tol.
MatchReport compare_sets(const ResonanceSet& a, const ResonanceSet& b, double tol);

struct SweepPoint {
  double t = 0.0;
  double max_displacement = 0.0;
  std::size_t unmatched = 0;
  std::size_t entries = 0;
};

/// Resonances of t V against those at t = 0; match_radius bounds how far an
/// entry may move and still count as the same resonance.
std::vector<SweepPoint> persistence_sweep(const ModelSurface& model, int j_min, int j_max, const PotentialSum& v,
                                          const std::vector<double>& t_grid, const Rect& region,
                                          const ScalingOptions& opt, double match_radius = 0.5);

/// Bilinear pairing sum_i w_i V_m(r_i) psi_a(i) psi_b(i). Throws mode_mismatch
/// unless mode_b = mode_a + m.
cplx order_pairing(const ModePotential& v, int mode_a, int mode_b, const CVector& psi_a, const CVector& psi_b,
                   const GridGeometry& grid);

struct OrderGrowthResult {
  cplx eigenvalue;  // shared eigenvalue of the two diagonal blocks
  cplx pairing;
  JordanReport uncoupled;
  JordanReport coupled;
  double location_shift = 0.0;  // eigenvalue move between the two assemblies
};

/// Two modes a and b = a + m with identical diagonal blocks share every
/// eigenvalue; the weight-m component couples them. Picks the shared eigenvalue
/// nearest target and reports the Jordan structure with and without coupling.
OrderGrowthResult order_growth(const ModelSurface& model, int mode_a, const ModePotential& v, const Discretization& d,
                               cplx target, double rank_tol = 1e-8);

}  // namespace isores
