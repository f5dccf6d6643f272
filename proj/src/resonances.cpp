#include "isores/resonances.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

#include "isores/error.hpp"
#include "isores/parallel.hpp"

namespace isores {

namespace {

bool sigma_less(const ResonanceEntry& a, const ResonanceEntry& b) {
  if (a.sigma.real() != b.sigma.real()) return a.sigma.real() < b.sigma.real();
  return a.sigma.imag() < b.sigma.imag();
}

double ray_distance(cplx z, double angle) {
  const cplx u = z * std::polar(1.0, -angle);
  return u.real() >= 0.0 ? std::abs(u.imag()) : std::abs(z);
}

struct Assembly {
  double theta = 0.0;
  int n = 0;
  std::unique_ptr<BlockOperator> op;
  std::unique_ptr<BlockSchur> schur;
  std::vector<cplx> eigenvalues;
};

Discretization scaling_grid(const ScalingOptions& opt, const ScalingContour& c, int n) {
  Discretization d = Discretization::full_line(opt.scheme, n, opt.box);
  if (opt.scheme == Scheme::chebyshev_collocation) d.breakpoints = c.kinks();
  if (d.breakpoints.empty() && opt.scheme == Scheme::chebyshev_collocation) {
    d.breakpoints = {-opt.ramp_end, -opt.inner_radius, opt.inner_radius, opt.ramp_end};
  }
  return d;
}

Assembly assemble(const ModelSurface& model, int j_min, int j_max, const PotentialSum& v, double theta, int n,
                  const ScalingOptions& opt, bool want_vectors) {
  if (opt.box < 2.0 * opt.ramp_end) {
    throw Error(ErrorKind::invalid_parameter, "truncation box must be at least twice the ramp end R1");
  }
  const ScalingContour c = build_contour(theta, opt.inner_radius, opt.ramp_end, opt.epsilon);
  Assembly a;
  a.theta = theta;
  a.n = n;
  a.op = std::make_unique<BlockOperator>(assemble_coupled(model, c, j_min, j_max, v, scaling_grid(opt, c, n)));
  a.schur = std::make_unique<BlockSchur>(*a.op, want_vectors);
  a.eigenvalues = a.schur->eigenvalues();
  return a;
}

// Single-linkage clusters of points closer than tol.
std::vector<std::vector<std::size_t>> clusters(const std::vector<cplx>& pts, double tol) {
  std::vector<std::size_t> parent(pts.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t k = i + 1; k < pts.size(); ++k) {
      if (std::abs(pts[i] - pts[k]) < tol) parent[find(i)] = find(k);
    }
  }
  std::vector<std::vector<std::size_t>> out;
  std::vector<long> slot(pts.size(), -1);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::size_t r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<long>(out.size());
      out.emplace_back();
    }
    out[static_cast<std::size_t>(slot[r])].push_back(i);
  }
  return out;
}

int cluster_order(const Assembly& ref, cplx center, int multiplicity, double diameter, const ScalingOptions& opt,
                  std::uint64_t salt) {
  double gap = std::numeric_limits<double>::infinity();
  for (const cplx& l : ref.eigenvalues) {
    const double d = std::abs(l - center);
    if (d > diameter + 1e-12 * std::max(1.0, std::abs(center))) gap = std::min(gap, d);
  }
  const double radius = std::min(0.5 * gap, 1e-2 * std::max(1.0, std::abs(center)));
  if (!(radius > 10.0 * diameter)) {
    throw Error(ErrorKind::ambiguous_cluster, "cluster at (" + std::to_string(center.real()) + ", " +
                                                  std::to_string(center.imag()) + ") is not isolated");
  }
  std::mt19937_64 rng(opt.seed ^ (salt * 0x9E3779B97F4A7C15ULL));
  std::normal_distribution<double> normal;
  const Eigen::Index dim = ref.op->dimension();
  CMatrix probes(dim, multiplicity + 4);
  for (Eigen::Index c = 0; c < probes.cols(); ++c) {
    for (Eigen::Index r = 0; r < dim; ++r) probes(r, c) = cplx(normal(rng), normal(rng));
  }
  const BlockSchur& bs = *ref.schur;
  const ShiftedSolver solve = [&bs](cplx z, const CMatrix& b) { return bs.solve_shifted(z, b); };
  const CMatrix p = apply_spectral_projector(solve, probes, Circle{center, radius}, opt.projector_nodes);
  const CMatrix q = range_basis(p, 1e-8);
  if (q.cols() != multiplicity) {
    throw Error(ErrorKind::ambiguous_cluster, "projector rank " + std::to_string(q.cols()) +
                                                  " differs from cluster size " + std::to_string(multiplicity));
  }
  const CMatrix compressed = q.adjoint() * ref.op->apply(q);
  const JordanReport rep = jordan_structure(compressed, center, opt.rank_tol, std::max(1.0, std::abs(center)));
  return rep.order;
}

}  // namespace

int ResonanceSet::total_multiplicity() const {
  int s = 0;
  for (const auto& e : entries) s += e.multiplicity;
  return s;
}

ResonanceSet merge_sets(const std::vector<ResonanceSet>& sets, double tol) {
  ResonanceSet out;
  if (sets.empty()) return out;
  out.model = sets.front().model;
  out.route = sets.front().route;
  out.j_min = sets.front().j_min;
  out.j_max = sets.front().j_max;
  std::vector<ResonanceEntry> all;
  for (const auto& s : sets) {
    out.j_min = std::min(out.j_min, s.j_min);
    out.j_max = std::max(out.j_max, s.j_max);
    all.insert(all.end(), s.entries.begin(), s.entries.end());
  }
  std::vector<cplx> pts;
  for (const auto& e : all) pts.push_back(e.sigma);
  for (const auto& c : clusters(pts, tol)) {
    ResonanceEntry e = all[c.front()];
    cplx mean = 0.0;
    int mult = 0;
    int order = 0;
    for (std::size_t i : c) {
      mean += all[i].sigma * static_cast<double>(all[i].multiplicity);
      mult += all[i].multiplicity;
      order = std::max(order, all[i].order);
    }
    e.sigma = mean / static_cast<double>(mult);
    e.multiplicity = mult;
    e.order = order;
    if (c.size() > 1) e.mode.reset();
    out.entries.push_back(e);
  }
  std::sort(out.entries.begin(), out.entries.end(), sigma_less);
  return out;
}

cplx sigma_from_spectral(const ModelSurface& model, cplx z) {
  switch (model.spectral_map()) {
    case SpectralMap::identity: return z;
    case SpectralMap::square: return std::sqrt(z);
    case SpectralMap::hyperbolic: return 0.5 - std::sqrt(0.25 - z);
  }
  return z;
}

ScaledSpectrum scaled_spectrum(const ModelSurface& model, int j_min, int j_max, const PotentialSum& v, double theta,
                               int n, const ScalingOptions& opt) {
  Assembly a = assemble(model, j_min, j_max, v, theta, n, opt, false);
  return {theta, n, std::move(a.eigenvalues)};
}

ResonanceSet find_resonances_scaling(const ModelSurface& model, int j_min, int j_max, const PotentialSum& v,
                                     const Rect& region, const ScalingOptions& opt) {
  if (opt.thetas.empty() || opt.ns.empty()) throw Error(ErrorKind::invalid_parameter, "need at least one theta and n");
  if (!(opt.stability_tol > 0.0)) throw Error(ErrorKind::invalid_parameter, "stability_tol must be positive");
  const double theta_min = *std::min_element(opt.thetas.begin(), opt.thetas.end());
  const double theta_max = *std::max_element(opt.thetas.begin(), opt.thetas.end());
  const int n_max = *std::max_element(opt.ns.begin(), opt.ns.end());
  if (!(theta_min > 0.0)) throw Error(ErrorKind::invalid_parameter, "scaling route needs theta > 0");

  // The reference assembly (finest grid, widest angle) keeps Schur vectors for
  // the order computation; the others only contribute eigenvalues.
  std::vector<Assembly> runs;
  for (double th : opt.thetas) {
    for (int n : opt.ns) {
      const bool ref = (n == n_max && th == theta_max);
      runs.push_back(assemble(model, j_min, j_max, v, th, n, opt, ref && opt.compute_order));
      if (!(ref && opt.compute_order)) {
        runs.back().schur.reset();
      }
    }
  }
  const auto ref_it = std::find_if(runs.begin(), runs.end(),
                                   [&](const Assembly& a) { return a.n == n_max && a.theta == theta_max; });
  const Assembly& ref = *ref_it;

  const double tol = opt.stability_tol;
  auto admissible = [&](cplx z) {
    if (!region.contains(z)) return false;
    if (!(std::arg(z) < 2.0 * theta_min - opt.ray_margin)) return false;
    for (double th : opt.thetas) {
      if (ray_distance(z, 2.0 * th) <= 5.0 * tol) return false;
    }
    return true;
  };

  std::vector<cplx> cand;
  for (const cplx& z : ref.eigenvalues) {
    if (admissible(z)) cand.push_back(z);
  }

  ResonanceSet out;
  out.model = std::string(model.name());
  out.route = "scaling";
  out.j_min = j_min;
  out.j_max = j_max;

  std::ostringstream label;
  label << "theta=";
  for (std::size_t i = 0; i < opt.thetas.size(); ++i) label << (i ? "," : "") << opt.thetas[i];
  label << " R0=" << opt.inner_radius << " R1=" << opt.ramp_end << " box=" << opt.box;

  std::uint64_t salt = 1;
  for (const auto& c : clusters(cand, tol)) {
    const int m = static_cast<int>(c.size());
    cplx center = 0.0;
    for (std::size_t i : c) center += cand[i];
    center /= static_cast<double>(m);
    double diameter = 0.0;
    for (std::size_t i : c) diameter = std::max(diameter, 2.0 * std::abs(cand[i] - center));

    bool stable = true;
    std::vector<cplx> centers(runs.size());
    for (std::size_t k = 0; k < runs.size() && stable; ++k) {
      std::vector<double> dist;
      dist.reserve(runs[k].eigenvalues.size());
      std::vector<cplx> near;
      for (const cplx& l : runs[k].eigenvalues) {
        if (std::abs(l - center) < tol) near.push_back(l);
      }
      if (static_cast<int>(near.size()) < m) {
        stable = false;
        break;
      }
      std::sort(near.begin(), near.end(),
                [&](cplx a, cplx b) { return std::abs(a - center) < std::abs(b - center); });
      cplx ck = 0.0;
      for (int i = 0; i < m; ++i) ck += near[static_cast<std::size_t>(i)];
      centers[k] = ck / static_cast<double>(m);
    }
    if (!stable) continue;

    ScalingDiagnostics diag;
    diag.contour = label.str();
    for (std::size_t a = 0; a < runs.size(); ++a) {
      for (std::size_t b = a + 1; b < runs.size(); ++b) {
        const double d = std::abs(centers[a] - centers[b]);
        if (runs[a].n == runs[b].n) diag.theta_spread = std::max(diag.theta_spread, d);
        if (runs[a].theta == runs[b].theta) diag.n_spread = std::max(diag.n_spread, d);
      }
    }

    ResonanceEntry e;
    e.sigma = sigma_from_spectral(model, center);
    e.multiplicity = m;
    e.order = opt.compute_order ? cluster_order(ref, center, m, diameter, opt, salt++) : 1;
    e.diagnostics = diag;
    out.entries.push_back(e);
  }
  std::sort(out.entries.begin(), out.entries.end(), sigma_less);
  return out;
}

MatchReport compare_sets(const ResonanceSet& a, const ResonanceSet& b, double tol) {
  struct Cand {
    double d;
    std::size_t i, k;
  };
  std::vector<Cand> cands;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    for (std::size_t k = 0; k < b.entries.size(); ++k) {
      const double d = std::abs(a.entries[i].sigma - b.entries[k].sigma);
      if (d < tol) cands.push_back({d, i, k});
    }
  }
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) { return x.d < y.d; });
  std::vector<char> used_a(a.entries.size(), 0), used_b(b.entries.size(), 0);
  MatchReport rep;
  for (const auto& c : cands) {
    if (used_a[c.i] || used_b[c.k]) continue;
    used_a[c.i] = used_b[c.k] = 1;
    const MatchPair p{c.i, c.k, c.d};
    rep.matched.push_back(p);
    rep.max_displacement = std::max(rep.max_displacement, c.d);
    if (a.entries[c.i].multiplicity != b.entries[c.k].multiplicity) rep.multiplicity_mismatches.push_back(p);
  }
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    if (!used_a[i]) rep.unmatched_left.push_back(i);
  }
  for (std::size_t k = 0; k < b.entries.size(); ++k) {
    if (!used_b[k]) rep.unmatched_right.push_back(k);
  }
  return rep;
}

std::vector<SweepPoint> persistence_sweep(const ModelSurface& model, int j_min, int j_max, const PotentialSum& v,
                                          const std::vector<double>& t_grid, const Rect& region,
                                          const ScalingOptions& opt, double match_radius) {
  for (double t : t_grid) {
    if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorKind::invalid_parameter, "sweep parameters must lie in [0, 1]");
  }
  const ResonanceSet base = find_resonances_scaling(model, j_min, j_max, scaled(v, 0.0), region, opt);
  std::vector<SweepPoint> out;
  for (double t : t_grid) {
    const ResonanceSet s = t == 0.0 ? base : find_resonances_scaling(model, j_min, j_max, scaled(v, t), region, opt);
    const MatchReport rep = compare_sets(base, s, match_radius);
    out.push_back({t, rep.max_displacement, rep.unmatched_left.size() + rep.unmatched_right.size(),
                   s.entries.size()});
  }
  return out;
}

cplx order_pairing(const ModePotential& v, int mode_a, int mode_b, const CVector& psi_a, const CVector& psi_b,
                   const GridGeometry& grid) {
  if (mode_b != mode_a + v.weight()) {
    throw Error(ErrorKind::mode_mismatch, "pairing needs mode_b = mode_a + weight (" + std::to_string(mode_a) +
                                              " + " + std::to_string(v.weight()) + " != " + std::to_string(mode_b) +
                                              ")");
  }
  const auto n = static_cast<Eigen::Index>(grid.r.size());
  if (psi_a.size() != n || psi_b.size() != n) throw Error(ErrorKind::invalid_parameter, "vector/grid size mismatch");
  cplx s = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) s += grid.weights(i) * v(grid.r[static_cast<std::size_t>(i)]) * psi_a(i) * psi_b(i);
  return s;
}

OrderGrowthResult order_growth(const ModelSurface& model, int mode_a, const ModePotential& v, const Discretization& d,
                               cplx target, double rank_tol) {
  const int mode_b = mode_a + v.weight();
  const int lo = std::min(mode_a, mode_b);
  const int hi = std::max(mode_a, mode_b);
  const BlockOperator coupled = assemble_coupled(model, std::nullopt, lo, hi, potential_sum({v}), d);
  const BlockOperator free = assemble_coupled(model, std::nullopt, lo, hi, PotentialSum{}, d);

  const CMatrix& ba = coupled.diagonal_block(mode_a);
  const CMatrix& bb = coupled.diagonal_block(mode_b);
  if ((ba - bb).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, ba.cwiseAbs().maxCoeff())) {
    throw Error(ErrorKind::mode_mismatch, "the two modes do not share their diagonal block");
  }
  const EigenResult ea = eigen_all(ba, true);
  std::size_t best = 0;
  for (std::size_t i = 1; i < ea.values.size(); ++i) {
    if (std::abs(ea.values[i] - target) < std::abs(ea.values[best] - target)) best = i;
  }
  OrderGrowthResult res;
  res.eigenvalue = ea.values[best];
  const CVector psi = ea.right->col(static_cast<Eigen::Index>(best));
  res.pairing = order_pairing(v, mode_a, mode_b, psi, psi, coupled.grid);

  // Dense matrices: the rank tests run on the full assembly, not a compression.
  res.uncoupled = jordan_structure(free.dense(), res.eigenvalue, rank_tol, norm2(free.dense()));
  res.coupled = jordan_structure(coupled.dense(), res.eigenvalue, rank_tol, norm2(coupled.dense()));

  auto nearest_mean = [&](const std::vector<cplx>& ev, int count) {
    std::vector<cplx> s = ev;
    std::sort(s.begin(), s.end(), [&](cplx a, cplx b) {
      return std::abs(a - res.eigenvalue) < std::abs(b - res.eigenvalue);
    });
    cplx m = 0.0;
    for (int i = 0; i < count; ++i) m += s[static_cast<std::size_t>(i)];
    return m / static_cast<double>(count);
  };
  const int alg = std::max(1, res.coupled.algebraic_multiplicity);
  const cplx loc_free = nearest_mean(BlockSchur(free, false).eigenvalues(), alg);
  const cplx loc_coupled = nearest_mean(BlockSchur(coupled, false).eigenvalues(), alg);
  res.location_shift = std::abs(loc_free - loc_coupled);
  return res;
}

}  // namespace isores
