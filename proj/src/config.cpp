#include "isores/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "isores/error.hpp"

namespace isores {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::config, path + ": " + what);
}

const json& field(const json& obj, const std::string& block, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(block + "." + key, "missing");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "must be finite");
  return x;
}

int integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<int>();
}

bool boolean(const json& v, const std::string& path) {
  if (!v.is_boolean()) fail(path, "expected true or false");
  return v.get<bool>();
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

double positive(const json& v, const std::string& path) {
  const double x = number(v, path);
  if (!(x > 0.0)) fail(path, "must be positive");
  return x;
}

cplx complex_pair(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) fail(path, "expected [re, im]");
  return {number(v[0], path + "[0]"), number(v[1], path + "[1]")};
}

template <class T, class Read>
std::vector<T> list(const json& v, const std::string& path, Read read) {
  if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array");
  std::vector<T> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(read(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

// Rejects keys the defaults do not know about, then overlays the input.
void overlay(json& base, const json& input, const std::string& path) {
  if (!input.is_object()) fail(path, "expected an object");
  for (auto it = input.begin(); it != input.end(); ++it) {
    const std::string sub = path.empty() ? it.key() : path + "." + it.key();
    if (!base.contains(it.key())) fail(sub, "unknown field");
    json& slot = base[it.key()];
    if (slot.is_object() && !slot.empty()) {
      overlay(slot, it.value(), sub);
    } else {
      slot = it.value();
    }
  }
}

ProfileSpec parse_profile(const json& c, const std::string& path) {
  if (!c.is_object()) fail(path, "expected an object");
  const std::string kind = text(field(c, path, "profile"), path + ".profile");
  auto only = [&](std::initializer_list<const char*> keys) {
    for (auto it = c.begin(); it != c.end(); ++it) {
      bool known = it.key() == "weight" || it.key() == "profile";
      for (const char* k : keys) known = known || it.key() == k;
      if (!known) fail(path + "." + it.key(), "unknown field for profile '" + kind + "'");
    }
  };
  auto opt = [&](const char* key, double def) {
    return c.contains(key) ? number(c[key], path + "." + key) : def;
  };
  if (kind == "bump") {
    only({"center", "width", "amplitude"});
    BumpProfile b{opt("center", 0.0), opt("width", 1.0), opt("amplitude", 1.0)};
    if (!(b.width > 0.0)) fail(path + ".width", "must be positive");
    return b;
  }
  if (kind == "rational") {
    only({"amplitude", "power"});
    RationalDecayProfile r{opt("amplitude", 1.0), opt("power", 2.0)};
    if (!(r.power > 0.0)) fail(path + ".power", "must be positive");
    return r;
  }
  if (kind == "geometric") {
    only({"rho", "neck"});
    GeometricCatenoidProfile g{opt("rho", 0.5), opt("neck", 1.0)};
    if (!(g.rho > 0.0 && g.rho < 1.0)) fail(path + ".rho", "must lie in (0, 1)");
    if (g.neck == 0.0) fail(path + ".neck", "must be nonzero");
    return g;
  }
  fail(path + ".profile", "unknown profile '" + kind + "' (bump, rational, geometric)");
}

PotentialConfig parse_potential(const json& p) {
  PotentialConfig out;
  const std::string b = "potential";
  out.family = text(p["family"], b + ".family");
  if (out.family != "none" && out.family != "geometric_catenoid" && out.family != "components") {
    fail(b + ".family", "expected none, geometric_catenoid or components");
  }
  out.rho = number(p["rho"], b + ".rho");
  if (!(out.rho > 0.0 && out.rho < 1.0)) fail(b + ".rho", "must lie in (0, 1)");
  out.neck = number(p["neck"], b + ".neck");
  if (out.neck == 0.0) fail(b + ".neck", "must be nonzero");
  out.explicit_terms = integer(p["explicit_terms"], b + ".explicit_terms");
  if (out.explicit_terms < 1) fail(b + ".explicit_terms", "must be >= 1");
  const json& comps = p["components"];
  if (!comps.is_array()) fail(b + ".components", "expected an array");
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const std::string path = b + ".components[" + std::to_string(i) + "]";
    ComponentConfig c;
    c.weight = integer(field(comps[i], path, "weight"), path + ".weight");
    if (c.weight == 0) fail(path + ".weight", "weight 0 is not a shift component");
    c.profile = parse_profile(comps[i], path);
    out.components.push_back(c);
  }
  if (out.family == "components" && out.components.empty()) fail(b + ".components", "must not be empty");
  if (!p["max_weight"].is_null()) {
    out.max_weight = integer(p["max_weight"], b + ".max_weight");
    if (*out.max_weight < 1) fail(b + ".max_weight", "must be >= 1");
  }
  out.r_cut = number(p["r_cut"], b + ".r_cut");
  if (out.r_cut < 0.0) fail(b + ".r_cut", "must be >= 0");
  out.symmetrize = boolean(p["symmetrize"], b + ".symmetrize");
  return out;
}

NumericsConfig parse_numerics(const json& n) {
  NumericsConfig out;
  const std::string b = "numerics.";
  auto pos = [&](const char* k) { return positive(n[k], b + k); };
  auto integ = [&](const char* k) { return integer(n[k], b + k); };
  auto at_least = [&](const char* k, int lo) {
    const int v = integ(k);
    if (v < lo) fail(b + k, "must be >= " + std::to_string(lo));
    return v;
  };

  out.j_min = integ("j_min");
  out.j_max = integ("j_max");
  if (out.j_max < out.j_min) fail(b + "j_max", "must be >= j_min");
  const json& r = n["region"];
  if (!r.is_object()) fail(b + "region", "expected an object");
  for (auto it = r.begin(); it != r.end(); ++it) {
    if (it.key() != "re_min" && it.key() != "re_max" && it.key() != "im_min" && it.key() != "im_max") {
      fail(b + "region." + it.key(), "unknown field");
    }
  }
  out.region = {number(field(r, b + "region", "re_min"), b + "region.re_min"),
                number(field(r, b + "region", "re_max"), b + "region.re_max"),
                number(field(r, b + "region", "im_min"), b + "region.im_min"),
                number(field(r, b + "region", "im_max"), b + "region.im_max")};
  if (!(out.region.re_min < out.region.re_max)) fail(b + "region.re_max", "must exceed re_min");
  if (!(out.region.im_min < out.region.im_max)) fail(b + "region.im_max", "must exceed im_min");
  out.thetas = list<double>(n["thetas"], b + "thetas", [](const json& v, const std::string& p) {
    const double t = positive(v, p);
    if (t >= 0.5 * pi) fail(p, "must be below pi/2");
    return t;
  });
  out.ns = list<int>(n["ns"], b + "ns", [](const json& v, const std::string& p) {
    const int k = integer(v, p);
    if (k < 8) fail(p, "must be >= 8");
    return k;
  });
  out.inner_radius = pos("inner_radius");
  out.ramp_end = pos("ramp_end");
  if (!(out.ramp_end > out.inner_radius)) fail(b + "ramp_end", "must exceed inner_radius");
  out.epsilon = pos("epsilon");
  out.box = pos("box");
  const std::string scheme = text(n["scheme"], b + "scheme");
  if (scheme == "chebyshev") {
    out.scheme = Scheme::chebyshev_collocation;
  } else if (scheme == "fd2") {
    out.scheme = Scheme::finite_difference_2nd;
  } else {
    fail(b + "scheme", "expected chebyshev or fd2");
  }
  out.stability_tol = pos("stability_tol");
  out.tolerance = pos("tolerance");
  out.match_radius = pos("match_radius");
  out.jost_tol = pos("jost_tol");
  out.break_threshold = pos("break_threshold");
  const json& w = n["ray_window"];
  if (!w.is_array() || w.size() != 2) fail(b + "ray_window", "expected [min, max]");
  out.ray_min = number(w[0], b + "ray_window[0]");
  out.ray_max = number(w[1], b + "ray_window[1]");
  if (!(out.ray_min >= 0.0 && out.ray_max > out.ray_min)) fail(b + "ray_window", "expected 0 <= min < max");
  out.ray_tol = pos("ray_tol");
  out.ray_mode = integ("ray_mode");
  out.t_grid = list<double>(n["t_grid"], b + "t_grid", number);
  out.fd_n = at_least("fd_n", 8);
  out.fd_box = pos("fd_box");
  out.mode_a = integ("mode_a");
  out.target = complex_pair(n["target"], b + "target");
  out.sigma = complex_pair(n["sigma"], b + "sigma");
  out.cutoff_radius = pos("cutoff_radius");
  out.decay_n = at_least("decay_n", 8);
  out.decay_box = pos("decay_box");
  out.p_orders = list<int>(n["p_orders"], b + "p_orders", [](const json& v, const std::string& p) {
    const int k = integer(v, p);
    if (k < 1) fail(p, "must be >= 1");
    return k;
  });
  out.samples = at_least("samples", 1);
  out.contours = at_least("contours", 0);
  out.k_list = list<int>(n["k_list"], b + "k_list", [](const json& v, const std::string& p) {
    const int k = integer(v, p);
    if (k < 1) fail(p, "must be >= 1");
    return k;
  });
  out.l_max = at_least("l_max", 0);

  const json& c = n["cap"];
  const std::string warp = text(c["warp"], b + "cap.warp");
  if (warp == "flat") {
    out.cap.warp = CapWarp::flat;
  } else if (warp == "hyperbolic") {
    out.cap.warp = CapWarp::hyperbolic;
  } else {
    fail(b + "cap.warp", "expected flat or hyperbolic");
  }
  out.cap.radius = positive(c["radius"], b + "cap.radius");
  out.cap.collar = boolean(c["collar"], b + "cap.collar");
  out.cap.collar_width = positive(c["collar_width"], b + "cap.collar_width");
  out.cap_n = integer(c["n"], b + "cap.n");
  if (out.cap_n < 8) fail(b + "cap.n", "must be >= 8");

  const json& s = n["seed"];
  if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() && s.get<std::int64_t>() < 0)) {
    fail(b + "seed", "expected a non-negative integer");
  }
  out.seed = s.get<std::uint64_t>();
  return out;
}

}  // namespace

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::free_resonances: return "free_resonances";
    case Experiment::isoresonance: return "isoresonance";
    case Experiment::counterexample: return "counterexample";
    case Experiment::persistence: return "persistence";
    case Experiment::order_growth: return "order_growth";
    case Experiment::weyl_bounds: return "weyl_bounds";
    case Experiment::mode_decay: return "mode_decay";
    case Experiment::determinant_scan: return "determinant_scan";
    case Experiment::sphere_shift: return "sphere_shift";
  }
  return "unknown";
}

PotentialSum PotentialConfig::build() const {
  PotentialSum v;
  if (family == "geometric_catenoid") {
    v = geometric_catenoid_family(rho, neck, explicit_terms);
  } else if (family == "components") {
    std::vector<ModePotential> parts;
    for (const auto& c : components) parts.push_back(homogeneous_component(c.weight, c.profile));
    v = potential_sum(std::move(parts));
  }
  if (max_weight || r_cut > 0.0) {
    const int m = max_weight ? *max_weight : std::max(1, explicit_terms);
    v = truncate(v, m, r_cut > 0.0 ? r_cut : std::numeric_limits<double>::infinity());
  }
  if (symmetrize) v = isores::symmetrize(v);
  return v;
}

ModelSurface ExperimentConfig::surface() const {
  if (model == ModelKind::catenoid || model == ModelKind::hyperbolic_cylinder) {
    return make_model(model, std::span<const double>(&model_parameter, 1));
  }
  return make_model(model);
}

json default_config() {
  return json{
      {"schema_version", schema_version},
      {"experiment", nullptr},
      {"model", {{"kind", "hyperbolic_plane"}, {"parameter", nullptr}}},
      {"potential",
       {{"family", "none"},
        {"rho", 0.5},
        {"neck", 1.0},
        {"explicit_terms", 16},
        {"components", json::array()},
        {"max_weight", nullptr},
        {"r_cut", 0.0},
        {"symmetrize", false}}},
      {"numerics",
       {{"j_min", -3},
        {"j_max", 3},
        {"region", {{"re_min", -3.5}, {"re_max", 0.5}, {"im_min", -0.5}, {"im_max", 0.5}}},
        {"thetas", {0.3, 0.4}},
        {"ns", {300, 500}},
        {"inner_radius", 3.0},
        {"ramp_end", 12.0},
        {"epsilon", 0.6},
        {"box", 25.0},
        {"scheme", "chebyshev"},
        {"stability_tol", 1e-6},
        {"tolerance", 1e-8},
        {"match_radius", 0.5},
        {"jost_tol", 1e-10},
        {"break_threshold", 1e-4},
        {"ray_window", {0.5, 50.0}},
        {"ray_tol", 0.05},
        {"ray_mode", 0},
        {"t_grid", {0.0, 0.25, 0.5, 0.75, 1.0}},
        {"fd_n", 400},
        {"fd_box", 20.0},
        {"mode_a", -1},
        {"target", {0.0, 0.0}},
        {"sigma", {2.0, 0.0}},
        {"cutoff_radius", 3.0},
        {"decay_n", 1200},
        {"decay_box", 16.0},
        {"p_orders", {1, 2, 3}},
        {"samples", 20},
        {"contours", 5},
        {"k_list", {1, 2, 3}},
        {"l_max", 8},
        {"cap", {{"warp", "flat"}, {"radius", 1.0}, {"collar", false}, {"collar_width", 0.25}, {"n", 48}}},
        {"seed", 20240611}}},
      {"output", {{"prefix", "results"}, {"csv", true}, {"json", true}, {"svg", false}}},
  };
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) fail("<root>", "expected a JSON object");
  if (!doc.contains("schema_version")) fail("schema_version", "missing");
  if (!doc["schema_version"].is_number_integer() || doc["schema_version"].get<int>() != schema_version) {
    fail("schema_version", "unsupported (expected " + std::to_string(schema_version) + ")");
  }
  if (!doc.contains("experiment")) fail("experiment", "missing");

  json resolved = default_config();
  overlay(resolved, doc, "");

  ExperimentConfig cfg;
  const std::string exp = text(resolved["experiment"], "experiment");
  bool found = false;
  for (int i = 0; i <= static_cast<int>(Experiment::sphere_shift); ++i) {
    const auto e = static_cast<Experiment>(i);
    if (to_string(e) == exp) {
      cfg.experiment = e;
      found = true;
    }
  }
  if (!found) fail("experiment", "unknown experiment '" + exp + "'");

  const std::string kind = text(resolved["model"]["kind"], "model.kind");
  const auto mk = parse_model_kind(kind);
  if (!mk) fail("model.kind", "unknown model '" + kind + "'");
  cfg.model = *mk;
  json& param = resolved["model"]["parameter"];
  if (cfg.model == ModelKind::catenoid || cfg.model == ModelKind::hyperbolic_cylinder) {
    if (param.is_null()) param = cfg.model == ModelKind::catenoid ? 1.0 : 2.0 * pi;
    cfg.model_parameter = number(param, "model.parameter");
    if (cfg.model == ModelKind::catenoid && cfg.model_parameter == 0.0) fail("model.parameter", "neck must be nonzero");
    if (cfg.model == ModelKind::hyperbolic_cylinder && !(cfg.model_parameter > 0.0)) {
      fail("model.parameter", "length must be positive");
    }
  } else if (!param.is_null()) {
    fail("model.parameter", "model '" + kind + "' takes no parameter");
  }

  cfg.potential = parse_potential(resolved["potential"]);
  cfg.numerics = parse_numerics(resolved["numerics"]);
  const json& o = resolved["output"];
  cfg.output.prefix = text(o["prefix"], "output.prefix");
  if (cfg.output.prefix.empty() || cfg.output.prefix.find('/') != std::string::npos) {
    fail("output.prefix", "must be a plain file name stem");
  }
  cfg.output.csv = boolean(o["csv"], "output.csv");
  cfg.output.json = boolean(o["json"], "output.json");
  cfg.output.svg = boolean(o["svg"], "output.svg");
  cfg.resolved = std::move(resolved);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config, path + ": cannot open");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::config, path + ": " + e.what());
  }
  return parse_config(doc);
}

std::uint64_t config_hash(const json& resolved) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : resolved.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace isores
