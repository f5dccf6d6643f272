#include "isores/runner.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "isores/compactspec.hpp"
#include "isores/determinants.hpp"
#include "isores/error.hpp"
#include "isores/parallel.hpp"
#include "isores/resonances.hpp"
#include "isores/sphere.hpp"

namespace isores {

using nlohmann::json;

namespace {

constexpr double equivariance_angle = 0.7;

ScalingOptions scaling_options(const NumericsConfig& n) {
  ScalingOptions o;
  o.thetas = n.thetas;
  o.ns = n.ns;
  o.inner_radius = n.inner_radius;
  o.ramp_end = n.ramp_end;
  o.epsilon = n.epsilon;
  o.box = n.box;
  o.scheme = n.scheme;
  o.stability_tol = n.stability_tol;
  o.seed = n.seed;
  return o;
}

Discretization fd_grid(const ModelSurface& m, const NumericsConfig& n) {
  return m.domain() == RadialDomain::half_line_with_pole
             ? Discretization::half_line(Scheme::finite_difference_2nd, n.fd_n, n.fd_box)
             : Discretization::full_line(Scheme::finite_difference_2nd, n.fd_n, n.fd_box);
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json entries_json(const ResonanceSet& s) {
  json out = json::array();
  for (const auto& e : s.entries) {
    json row{{"sigma", complex_json(e.sigma)}, {"multiplicity", e.multiplicity}, {"order", e.order}};
    if (e.mode) row["mode"] = *e.mode;
    if (e.diagnostics) {
      row["theta_spread"] = e.diagnostics->theta_spread;
      row["n_spread"] = e.diagnostics->n_spread;
    }
    out.push_back(row);
  }
  return out;
}

ResultRow entry_row(const NumericsConfig& n, const ResonanceEntry& e, std::optional<double> t) {
  ResultRow r;
  r.j_min = e.mode ? *e.mode : n.j_min;
  r.j_max = e.mode ? *e.mode : n.j_max;
  r.t = t;
  r.sigma = e.sigma;
  r.multiplicity = e.multiplicity;
  r.order = e.order;
  return r;
}

std::vector<cplx> sigmas(const ResonanceSet& s) {
  std::vector<cplx> out;
  for (const auto& e : s.entries) out.push_back(e.sigma);
  return out;
}

// Continuum rays z = s e^{2 i theta} mapped to the sigma plane.
std::vector<std::vector<cplx>> continuum_rays(const ModelSurface& m, const NumericsConfig& n) {
  std::vector<std::vector<cplx>> rays;
  for (double th : n.thetas) {
    std::vector<cplx> line;
    for (int i = 0; i <= 64; ++i) {
      const double s = n.ray_max * i / 64.0;
      line.push_back(sigma_from_spectral(m, std::polar(s, 2.0 * th)));
    }
    rays.push_back(std::move(line));
  }
  return rays;
}

json match_json(const MatchReport& rep) {
  return json{{"matched", rep.matched.size()},
              {"unmatched_free", rep.unmatched_left.size()},
              {"unmatched_perturbed", rep.unmatched_right.size()},
              {"multiplicity_mismatches", rep.multiplicity_mismatches.size()},
              {"max_displacement", rep.max_displacement}};
}

ExperimentResult free_resonances(const ExperimentConfig& cfg) {
  const ModelSurface m = cfg.surface();
  const NumericsConfig& n = cfg.numerics;
  ExperimentResult res;
  if (m.has_oracle()) {
    std::vector<ResonanceSet> per_mode;
    std::vector<ResonanceSet> oracle_sets;
    for (int j = n.j_min; j <= n.j_max; ++j) {
      per_mode.push_back(find_resonances_jost(m, j, n.region, n.jost_tol));
      ResonanceSet o;
      for (const auto& e : m.oracle(j, n.region)) o.entries.push_back({e.sigma, e.multiplicity, 1, j, std::nullopt});
      oracle_sets.push_back(o);
    }
    for (const auto& s : per_mode) {
      for (const auto& e : s.entries) res.rows.push_back(entry_row(n, e, std::nullopt));
    }
    ResonanceSet found = merge_sets(per_mode, 1e-7);
    const ResonanceSet expected = merge_sets(oracle_sets, 1e-7);
    for (const auto& e : found.entries) {
      ResonanceEntry u = e;
      u.mode.reset();
      res.rows.push_back(entry_row(n, u, std::nullopt));
    }
    const MatchReport rep = compare_sets(expected, found, std::max(n.tolerance, 1e-7));
    const bool orders = std::all_of(found.entries.begin(), found.entries.end(), [](const auto& e) { return e.order == 1; });
    res.summary = {{"route", "jost"},
                   {"entries", entries_json(found)},
                   {"total_multiplicity", found.total_multiplicity()},
                   {"oracle_total_multiplicity", expected.total_multiplicity()},
                   {"oracle_match", match_json(rep)}};
    res.assertion = "union over modes equals the exact resonance set within tolerance, every order 1";
    res.passed = rep.identical() && rep.max_displacement <= n.tolerance && orders;
    PlotData plot;
    plot.series.push_back({"exact", true, sigmas(expected)});
    plot.series.push_back({"computed", false, sigmas(found)});
    res.plot = plot;
    return res;
  }

  const ScalingOptions opt = scaling_options(n);
  const ResonanceSet found = find_resonances_scaling(m, n.j_min, n.j_max, PotentialSum{}, n.region, opt);
  for (const auto& e : found.entries) res.rows.push_back(entry_row(n, e, std::nullopt));

  // Continuum Ritz values: every eigenvalue of the ray mode in the modulus
  // window that is not an accepted resonance must sit on its rotated ray.
  double worst_ray = 0.0;
  double worst_spread = 0.0;
  std::size_t continuum = 0;
  json runs = json::array();
  for (double th : n.thetas) {
    for (int size : n.ns) {
      const ScaledSpectrum sp = scaled_spectrum(m, n.ray_mode, n.ray_mode, PotentialSum{}, th, size, opt);
      double run_worst = 0.0;
      std::size_t run_count = 0;
      for (const cplx& z : sp.eigenvalues) {
        const double r = std::abs(z);
        if (r < n.ray_min || r > n.ray_max) continue;
        const cplx s = sigma_from_spectral(m, z);
        const bool resonance = std::any_of(found.entries.begin(), found.entries.end(), [&](const auto& e) {
          return std::abs(e.sigma - s) < 1e3 * n.stability_tol;
        });
        if (resonance) continue;
        run_worst = std::max(run_worst, std::abs(std::arg(z) - 2.0 * th));
        ++run_count;
      }
      worst_ray = std::max(worst_ray, run_worst);
      continuum += run_count;
      runs.push_back({{"theta", th}, {"n", size}, {"continuum_values", run_count}, {"max_ray_deviation", run_worst}});
      ResultRow r;
      r.j_min = n.ray_mode;
      r.j_max = n.ray_mode;
      r.theta = th;
      r.n = size;
      r.displacement = run_worst;
      res.rows.push_back(r);
    }
  }
  for (const auto& e : found.entries) {
    if (e.diagnostics) worst_spread = std::max({worst_spread, e.diagnostics->theta_spread, e.diagnostics->n_spread});
  }
  res.summary = {{"route", "scaling"},
                 {"entries", entries_json(found)},
                 {"total_multiplicity", found.total_multiplicity()},
                 {"ray_mode", n.ray_mode},
                 {"continuum_values", continuum},
                 {"max_ray_deviation", worst_ray},
                 {"max_candidate_spread", worst_spread},
                 {"scaling_runs", runs}};
  res.assertion = "continuum Ritz values within ray_tol of arg 2 theta; resonances stable to stability_tol";
  res.passed = continuum > 0 && worst_ray < n.ray_tol && worst_spread <= n.stability_tol;
  PlotData plot;
  plot.series.push_back({"resonances", true, sigmas(found)});
  plot.rays = continuum_rays(m, n);
  res.plot = plot;
  return res;
}

ExperimentResult compare_free_perturbed(const ExperimentConfig& cfg, bool counterexample) {
  const ModelSurface m = cfg.surface();
  const NumericsConfig& n = cfg.numerics;
  PotentialSum v = cfg.potential.build();
  if (counterexample && !cfg.potential.symmetrize) v = symmetrize(v);
  const ScalingOptions opt = scaling_options(n);
  const ResonanceSet free = find_resonances_scaling(m, n.j_min, n.j_max, PotentialSum{}, n.region, opt);
  const ResonanceSet pert = find_resonances_scaling(m, n.j_min, n.j_max, v, n.region, opt);
  const MatchReport rep = compare_sets(free, pert, n.match_radius);

  ExperimentResult res;
  for (const auto& e : free.entries) res.rows.push_back(entry_row(n, e, 0.0));
  std::vector<std::optional<double>> moved(pert.entries.size());
  for (const auto& p : rep.matched) moved[p.right] = p.displacement;
  for (std::size_t i = 0; i < pert.entries.size(); ++i) {
    ResultRow r = entry_row(n, pert.entries[i], 1.0);
    r.displacement = moved[i];
    res.rows.push_back(r);
  }
  res.summary = {{"free", entries_json(free)},
                 {"perturbed", entries_json(pert)},
                 {"comparison", match_json(rep)},
                 {"one_signed", v.one_signed()},
                 {"summability", v.summability()},
                 {"truncation_tail_bound", v.truncation_tail_bound()}};
  if (counterexample) {
    res.assertion = "symmetrized potential moves a resonance by more than break_threshold or unmatches one";
    res.passed = rep.max_displacement > n.break_threshold || !rep.identical();
    res.summary["baseline_max_displacement"] = rep.max_displacement;
  } else {
    res.assertion = "identical resonance sets with max displacement below tolerance";
    res.passed = rep.identical() && rep.max_displacement < n.tolerance;
  }
  PlotData plot;
  plot.series.push_back({"free", true, sigmas(free)});
  plot.series.push_back({"perturbed", false, sigmas(pert)});
  plot.rays = continuum_rays(m, n);
  res.plot = plot;
  return res;
}

ExperimentResult persistence(const ExperimentConfig& cfg) {
  const ModelSurface m = cfg.surface();
  const NumericsConfig& n = cfg.numerics;
  const PotentialSum v = cfg.potential.build();
  const auto sweep = persistence_sweep(m, n.j_min, n.j_max, v, n.t_grid, n.region, scaling_options(n), n.match_radius);
  ExperimentResult res;
  json pts = json::array();
  double worst = 0.0;
  std::size_t unmatched = 0;
  for (const auto& p : sweep) {
    ResultRow r;
    r.j_min = n.j_min;
    r.j_max = n.j_max;
    r.t = p.t;
    r.multiplicity = static_cast<int>(p.entries);
    r.displacement = p.max_displacement;
    res.rows.push_back(r);
    pts.push_back({{"t", p.t}, {"max_displacement", p.max_displacement}, {"unmatched", p.unmatched}, {"entries", p.entries}});
    worst = std::max(worst, p.max_displacement);
    unmatched += p.unmatched;
  }
  res.summary = {{"sweep", pts}, {"max_displacement", worst}, {"unmatched", unmatched}};
  res.assertion = "every sweep point matches the free set with displacement below tolerance";
  res.passed = unmatched == 0 && worst < n.tolerance;
  PlotData plot;
  plot.x_label = "t";
  plot.y_label = "log10 max displacement";
  PlotSeries s{"displacement", true, {}};
  for (const auto& p : sweep) s.points.emplace_back(p.t, std::log10(std::max(p.max_displacement, 1e-17)));
  plot.series.push_back(s);
  res.plot = plot;
  return res;
}

json jordan_json(const JordanReport& j) {
  return json{{"location", complex_json(j.location)},
              {"algebraic_multiplicity", j.algebraic_multiplicity},
              {"geometric_multiplicity", j.geometric_multiplicity},
              {"order", j.order},
              {"rank_sequence", j.rank_sequence}};
}

ExperimentResult order_growth_experiment(const ExperimentConfig& cfg) {
  const ModelSurface m = cfg.surface();
  const NumericsConfig& n = cfg.numerics;
  const PotentialSum v = cfg.potential.build();
  const auto comps = v.materialized(std::max(std::abs(n.j_min), std::abs(n.j_max)) * 2 + 1);
  if (comps.size() != 1) {
    throw Error(ErrorKind::config, "potential: order_growth needs exactly one weight, got " + std::to_string(comps.size()));
  }
  const OrderGrowthResult g = order_growth(m, n.mode_a, comps.front(), fd_grid(m, n), n.target);
  const int mode_b = n.mode_a + comps.front().weight();
  const bool pairing_zero = std::abs(g.pairing) <= 1e-8;
  const double loc_tol = 1e-6 * std::max(1.0, std::abs(g.eigenvalue));

  ExperimentResult res;
  for (const auto* rep : {&g.uncoupled, &g.coupled}) {
    ResultRow r;
    r.j_min = n.mode_a;
    r.j_max = mode_b;
    r.n = n.fd_n;
    r.t = rep == &g.uncoupled ? 0.0 : 1.0;
    r.sigma = sigma_from_spectral(m, rep->location);
    r.multiplicity = rep->algebraic_multiplicity;
    r.order = rep->order;
    r.displacement = rep == &g.uncoupled ? 0.0 : g.location_shift;
    res.rows.push_back(r);
  }
  res.summary = {{"eigenvalue", complex_json(g.eigenvalue)},
                 {"pairing", complex_json(g.pairing)},
                 {"uncoupled", jordan_json(g.uncoupled)},
                 {"coupled", jordan_json(g.coupled)},
                 {"location_shift", g.location_shift}};
  const bool same_mult = g.uncoupled.algebraic_multiplicity == g.coupled.algebraic_multiplicity;
  if (pairing_zero) {
    res.assertion = "zero pairing: coupled order stays 1";
    res.passed = g.coupled.order == 1 && same_mult;
  } else {
    res.assertion = "nonzero pairing: order 1 -> 2 with unchanged location and algebraic multiplicity";
    res.passed = g.uncoupled.order == 1 && g.coupled.order == 2 && same_mult && g.location_shift < loc_tol;
  }
  return res;
}

ExperimentResult weyl_bounds(const ExperimentConfig& cfg) {
  const NumericsConfig& n = cfg.numerics;
  const WeylReport rep = weyl_bound_check(n.cap, n.j_min, n.j_max, n.cap_n);
  ExperimentResult res;
  PlotData plot;
  plot.x_label = "j";
  plot.y_label = "mu_1(j) / (1 + j^2)";
  PlotSeries s{"mu_1", true, {}};
  json rows = json::array();
  for (std::size_t i = 0; i < rep.modes.size(); ++i) {
    ResultRow r;
    r.j_min = rep.modes[i];
    r.j_max = rep.modes[i];
    r.n = n.cap_n;
    r.sigma = cplx(rep.mu1[i], 0.0);
    res.rows.push_back(r);
    const double j = rep.modes[i];
    rows.push_back({{"j", rep.modes[i]}, {"mu1", rep.mu1[i]}});
    s.points.emplace_back(j, rep.mu1[i] / (1.0 + j * j));
  }
  plot.series.push_back(s);
  res.summary = {{"mu1", rows}, {"pass", rep.pass}, {"note", rep.note}};
  res.summary["c1_est"] = std::isfinite(rep.c1_est) ? json(rep.c1_est) : json(nullptr);
  res.summary["c2_est"] = rep.c2_est;
  res.assertion = "C1 and C2 finite and positive, mu_1(j)/j^2 inside [C1, 2 C2]";
  res.passed = rep.pass;
  res.plot = plot;
  return res;
}

ExperimentResult mode_decay(const ExperimentConfig& cfg) {
  const ModelSurface m = cfg.surface();
  const NumericsConfig& n = cfg.numerics;
  DecayOptions opt;
  opt.n = n.decay_n;
  opt.box = n.decay_box;
  const DecayReport rep = mode_resolvent_decay(m, n.sigma, n.cutoff_radius, n.j_min, n.j_max, opt);
  ExperimentResult res;
  PlotData plot;
  plot.x_label = "log j";
  plot.y_label = "log norm";
  PlotSeries s{"norm", true, {}};
  json rows = json::array();
  for (std::size_t i = 0; i < rep.modes.size(); ++i) {
    ResultRow r;
    r.j_min = rep.modes[i];
    r.j_max = rep.modes[i];
    r.n = n.decay_n;
    r.sigma = n.sigma;
    r.displacement = rep.norms[i];
    res.rows.push_back(r);
    rows.push_back({{"j", rep.modes[i]}, {"norm", rep.norms[i]}});
    s.points.emplace_back(std::log(static_cast<double>(rep.modes[i])), std::log(rep.norms[i]));
  }
  plot.series.push_back(s);
  res.summary = {{"norms", rows},
                 {"slope", rep.slope},
                 {"weighted_sup", rep.weighted_sup},
                 {"weighted_argmax", rep.weighted_argmax}};
  res.assertion = "slope in [-2.2, -1.8] and (1 + j^2) norm maximal at |j| <= 5";
  res.passed = rep.slope >= -2.2 && rep.slope <= -1.8 && std::isfinite(rep.weighted_sup) &&
               std::abs(rep.weighted_argmax) <= 5;
  res.plot = plot;
  return res;
}

ExperimentResult determinant_scan(const ExperimentConfig& cfg) {
  const ModelSurface m = cfg.surface();
  const NumericsConfig& n = cfg.numerics;
  const PotentialSum v = cfg.potential.build();
  const LsKernel kernel(m, n.j_min, n.j_max, v, fd_grid(m, n));
  std::mt19937_64 rng(n.seed);
  std::uniform_real_distribution<double> ure(n.region.re_min, n.region.re_max);
  std::uniform_real_distribution<double> uim(n.region.im_min, n.region.im_max);

  std::vector<cplx> points;
  int attempts = 0;
  while (static_cast<int>(points.size()) < n.samples) {
    if (++attempts > 100 * n.samples) throw Error(ErrorKind::non_convergence, "no admissible sample points in region");
    const cplx s(ure(rng), uim(rng));
    try {
      kernel.check_admissible(s);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::singular_resolvent) continue;
      throw;
    }
    points.push_back(s);
  }

  ExperimentResult res;
  double worst = 0.0;
  double p_spread = 0.0;
  json samples = json::array();
  for (const cplx& s : points) {
    const auto ev = kernel.eigenvalues(s);
    std::optional<cplx> first;
    for (int p : n.p_orders) {
      const cplx d = det_reg(std::span<const cplx>(ev), p);
      ResultRow r;
      r.j_min = n.j_min;
      r.j_max = n.j_max;
      r.n = n.fd_n;
      r.sigma = s;
      r.order = p;
      r.displacement = std::abs(d - 1.0);
      res.rows.push_back(r);
      worst = std::max(worst, std::abs(d - 1.0));
      if (first) p_spread = std::max(p_spread, std::abs(d - *first));
      if (!first) first = d;
      samples.push_back({{"sigma", complex_json(s)}, {"p", p}, {"det", complex_json(d)}});
    }
  }

  const double w = n.region.re_max - n.region.re_min;
  const double h = n.region.im_max - n.region.im_min;
  std::uniform_real_distribution<double> urad(0.05, 0.25);
  json circles = json::array();
  int total_zeros = 0;
  for (int c = 0; c < n.contours; ++c) {
    const double radius = urad(rng) * std::min(w, h);
    const cplx center(n.region.re_min + radius + (w - 2.0 * radius) * std::uniform_real_distribution<double>(0, 1)(rng),
                      n.region.im_min + radius + (h - 2.0 * radius) * std::uniform_real_distribution<double>(0, 1)(rng));
    const int p = n.p_orders.back();
    const int zeros = count_zeros(
        [&](cplx s) {
          const auto ev = kernel.eigenvalues(s);
          return det_reg(std::span<const cplx>(ev), p);
        },
        Circle{center, radius});
    total_zeros += std::abs(zeros);
    ResultRow r;
    r.j_min = n.j_min;
    r.j_max = n.j_max;
    r.n = n.fd_n;
    r.sigma = center;
    r.multiplicity = zeros;
    r.order = p;
    res.rows.push_back(r);
    circles.push_back({{"center", complex_json(center)}, {"radius", radius}, {"zeros", zeros}});
  }
  res.summary = {{"one_signed", v.one_signed()},
                 {"max_abs_det_minus_one", worst},
                 {"max_p_disagreement", p_spread},
                 {"samples", samples},
                 {"contours", circles}};
  if (v.one_signed()) {
    res.assertion = "one-signed potential: det_p = 1 within 1e-12 for every p, no zeros inside any contour";
    res.passed = worst <= 1e-12 && p_spread <= 1e-12 && total_zeros == 0;
  } else {
    res.assertion = "mixed-sign potential: no identity asserted";
    res.passed = true;
  }
  PlotData plot;
  plot.series.push_back({"samples", true, points});
  res.plot = plot;
  return res;
}

ExperimentResult sphere_shift(const ExperimentConfig& cfg) {
  const NumericsConfig& n = cfg.numerics;
  ExperimentResult res;
  json per_k = json::array();
  bool ok = true;
  for (int k : n.k_list) {
    const ShiftMatrix s = multiplication_matrix(k, n.l_max, n.l_max + k + 2, 2 * (n.l_max + k) + 2);
    const ShiftReport sv = shift_verify(s);
    const NilpotencyReport nil = nilpotency(s);
    const double defect = phase_equivariance_defect(s, equivariance_angle);
    ok = ok && sv.max_violation < 1e-12 && sv.triangular_in_m && nil.residual < 1e-10 && defect < 1e-12;
    ResultRow r;
    r.n = n.l_max;
    r.order = k;
    r.displacement = sv.max_violation;
    res.rows.push_back(r);
    per_k.push_back({{"k", k},
                     {"l_max", n.l_max},
                     {"n_gauss", s.n_gauss},
                     {"n_azimuthal", s.n_azimuthal},
                     {"max_violation", sv.max_violation},
                     {"triangular_in_m", sv.triangular_in_m},
                     {"nilpotency_power", nil.power},
                     {"nilpotency_residual", nil.residual},
                     {"phase_equivariance_defect", defect}});
  }
  res.summary = {{"shifts", per_k}};
  res.assertion = "forbidden entries < 1e-12, S^p = 0 within 1e-10, phase equivariance within 1e-12";
  res.passed = ok;
  return res;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <class T>
std::string cell(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_same_v<T, double>) {
    return fmt(*v);
  } else {
    return std::to_string(*v);
  }
}

std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') {
      out += "&lt;";
    } else if (c == '>') {
      out += "&gt;";
    } else if (c == '&') {
      out += "&amp;";
    } else {
      out += c;
    }
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case Experiment::free_resonances: return free_resonances(cfg);
    case Experiment::isoresonance: return compare_free_perturbed(cfg, false);
    case Experiment::counterexample: return compare_free_perturbed(cfg, true);
    case Experiment::persistence: return persistence(cfg);
    case Experiment::order_growth: return order_growth_experiment(cfg);
    case Experiment::weyl_bounds: return weyl_bounds(cfg);
    case Experiment::mode_decay: return mode_decay(cfg);
    case Experiment::determinant_scan: return determinant_scan(cfg);
    case Experiment::sphere_shift: return sphere_shift(cfg);
  }
  throw Error(ErrorKind::config, "experiment: unhandled");
}

std::string csv_header_line(const ExperimentConfig& cfg) {
  return std::string("# tool=isores version=") + tool_version + " config_hash=" + hash_hex(config_hash(cfg.resolved));
}

std::string format_csv(const ExperimentConfig& cfg, const ExperimentResult& res) {
  std::ostringstream out;
  out << csv_header_line(cfg) << '\n';
  out << "model,experiment,j_min,j_max,theta,n,t,re_sigma,im_sigma,multiplicity,order,displacement\n";
  const std::string model(to_string(cfg.model));
  const std::string exp(to_string(cfg.experiment));
  for (const auto& r : res.rows) {
    const std::optional<double> re = r.sigma ? std::optional<double>(r.sigma->real()) : std::nullopt;
    const std::optional<double> im = r.sigma ? std::optional<double>(r.sigma->imag()) : std::nullopt;
    out << model << ',' << exp << ',' << cell(r.j_min) << ',' << cell(r.j_max) << ',' << cell(r.theta) << ','
        << cell(r.n) << ',' << cell(r.t) << ',' << cell(re) << ',' << cell(im) << ',' << cell(r.multiplicity) << ','
        << cell(r.order) << ',' << cell(r.displacement) << '\n';
  }
  return out.str();
}

json format_summary(const ExperimentConfig& cfg, const ExperimentResult& res) {
  json rows = json::array();
  for (const auto& r : res.rows) {
    json o = json::object();
    auto put = [&o](const char* k, const auto& v) {
      if (v) o[k] = *v;
    };
    put("j_min", r.j_min);
    put("j_max", r.j_max);
    put("theta", r.theta);
    put("n", r.n);
    put("t", r.t);
    if (r.sigma) {
      o["re_sigma"] = r.sigma->real();
      o["im_sigma"] = r.sigma->imag();
    }
    put("multiplicity", r.multiplicity);
    put("order", r.order);
    put("displacement", r.displacement);
    rows.push_back(o);
  }
  return json{{"tool", "isores"},
              {"version", tool_version},
              {"config_hash", hash_hex(config_hash(cfg.resolved))},
              {"config", cfg.resolved},
              {"model", std::string(to_string(cfg.model))},
              {"experiment", std::string(to_string(cfg.experiment))},
              {"rows", rows},
              {"summary", res.summary},
              {"check", {{"assertion", res.assertion}, {"passed", res.passed}}}};
}

std::string render_svg(const PlotData& plot) {
  constexpr double W = 640, H = 480, pad = 56;
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  auto grow = [&](cplx p) {
    x0 = std::min(x0, p.real());
    x1 = std::max(x1, p.real());
    y0 = std::min(y0, p.imag());
    y1 = std::max(y1, p.imag());
  };
  for (const auto& s : plot.series) {
    for (const cplx& p : s.points) grow(p);
  }
  for (const auto& r : plot.rays) {
    for (const cplx& p : r) grow(p);
  }
  if (!(x0 <= x1)) x0 = -1, x1 = 1, y0 = -1, y1 = 1;
  if (x1 - x0 < 1e-12) x0 -= 1, x1 += 1;
  if (y1 - y0 < 1e-12) y0 -= 1, y1 += 1;
  const double mx = 0.05 * (x1 - x0), my = 0.05 * (y1 - y0);
  x0 -= mx, x1 += mx, y0 -= my, y1 += my;
  auto px = [&](double x) { return pad + (x - x0) / (x1 - x0) * (W - 2 * pad); };
  auto py = [&](double y) { return H - pad - (y - y0) / (y1 - y0) * (H - 2 * pad); };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
    << ' ' << H << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << W - 2 * pad << "\" height=\"" << H - 2 * pad
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"" << H - 16 << "\" text-anchor=\"middle\" font-size=\"13\">"
    << xml_escape(plot.x_label) << "</text>\n";
  o << "<text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 " << H / 2
    << ")\">" << xml_escape(plot.y_label) << "</text>\n";
  o << "<text x=\"" << pad << "\" y=\"" << H - pad + 16 << "\" font-size=\"10\">" << fmt(x0) << "</text>\n";
  o << "<text x=\"" << W - pad << "\" y=\"" << H - pad + 16 << "\" font-size=\"10\" text-anchor=\"end\">" << fmt(x1)
    << "</text>\n";
  o << "<text x=\"" << pad - 4 << "\" y=\"" << H - pad << "\" font-size=\"10\" text-anchor=\"end\">" << fmt(y0)
    << "</text>\n";
  o << "<text x=\"" << pad - 4 << "\" y=\"" << pad + 10 << "\" font-size=\"10\" text-anchor=\"end\">" << fmt(y1)
    << "</text>\n";
  for (const auto& r : plot.rays) {
    o << "<polyline fill=\"none\" stroke=\"gray\" stroke-dasharray=\"4 3\" points=\"";
    for (const cplx& p : r) o << px(p.real()) << ',' << py(p.imag()) << ' ';
    o << "\"/>\n";
  }
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  int legend = 0;
  for (std::size_t si = 0; si < plot.series.size(); ++si) {
    const auto& s = plot.series[si];
    const char* c = colors[si % 4];
    for (const cplx& p : s.points) {
      const double x = px(p.real()), y = py(p.imag());
      if (s.hollow) {
        o << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"5\" fill=\"none\" stroke=\"" << c << "\"/>\n";
      } else {
        o << "<path d=\"M" << x - 4 << ',' << y - 4 << " L" << x + 4 << ',' << y + 4 << " M" << x - 4 << ',' << y + 4
          << " L" << x + 4 << ',' << y - 4 << "\" stroke=\"" << c << "\"/>\n";
      }
    }
    o << "<text x=\"" << W - pad - 4 << "\" y=\"" << pad + 14 + 14 * legend++ << "\" font-size=\"11\" text-anchor=\"end\" fill=\""
      << c << "\">" << xml_escape(s.name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

int run_config_file(const std::string& path, const RunOptions& opt, std::ostream& log) {
  try {
    if (opt.threads) {
      if (*opt.threads < 1) throw Error(ErrorKind::config, "--threads: must be >= 1");
      set_thread_count(*opt.threads);
    }
    ExperimentConfig cfg = load_config(path);
    if (opt.seed) {
      cfg.numerics.seed = *opt.seed;
      cfg.resolved["numerics"]["seed"] = *opt.seed;
    }
    const ExperimentResult res = run_experiment(cfg);

    namespace fs = std::filesystem;
    fs::create_directories(opt.out_dir);
    const fs::path base = fs::path(opt.out_dir) / cfg.output.prefix;
    auto write = [&](const std::string& ext, const std::string& body) {
      const fs::path p = base.string() + ext;
      std::ofstream out(p, std::ios::binary);
      if (!out) throw Error(ErrorKind::config, "output: cannot write " + p.string());
      out << body;
      log << "wrote " << p.string() << '\n';
    };
    if (cfg.output.csv) write(".csv", format_csv(cfg, res));
    if (cfg.output.json) write(".json", format_summary(cfg, res).dump(2) + "\n");
    if (cfg.output.svg) {
      if (res.plot) {
        std::string svg = render_svg(*res.plot);
        svg.insert(svg.find('\n') + 1, "<!-- " + csv_header_line(cfg).substr(2) + " -->\n");
        write(".svg", svg);
      } else {
        log << "no plot for experiment " << to_string(cfg.experiment) << '\n';
      }
    }
    log << to_string(cfg.experiment) << ": " << res.assertion << ": " << (res.passed ? "PASS" : "FAIL") << '\n';
    return opt.check && !res.passed ? 1 : 0;
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return is_numerical(e.kind()) ? 3 : 2;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace isores
