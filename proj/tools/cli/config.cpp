#include "config.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

namespace dghcli {

namespace {

template <typename T>
T scalar(const YAML::Node& node, const std::string& where) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(fmt::format("{}: expected a {} value", where,
                                  std::is_floating_point_v<T> ? "numeric" : "valid"));
  }
}

template <typename T>
void read(const YAML::Node& parent, const char* key, T& out, const std::string& section) {
  const YAML::Node node = parent[key];
  if (node) out = scalar<T>(node, section + "." + key);
}

template <typename T>
std::vector<T> list(const YAML::Node& node, const std::string& where) {
  if (!node.IsSequence()) throw ConfigError(where + ": expected a list");
  std::vector<T> out;
  for (const auto& item : node) out.push_back(scalar<T>(item, where));
  return out;
}

void check_keys(const YAML::Node& node, std::initializer_list<const char*> allowed,
                const std::string& where) {
  if (!node.IsMap()) throw ConfigError(where + ": expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(fmt::format("{}: unknown key '{}'", where, key));
  }
}

std::vector<double> read_samples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read samples file {}", path.string()));
  std::vector<double> v;
  std::string token;
  while (in >> token) {
    for (char& c : token) {
      if (c == ',') c = ' ';
    }
    std::istringstream parts(token);
    std::string piece;
    while (parts >> piece) {
      try {
        std::size_t used = 0;
        v.push_back(std::stod(piece, &used));
        if (used != piece.size()) throw std::invalid_argument(piece);
      } catch (const std::exception&) {
        throw ConfigError(fmt::format("{}: not a number: '{}'", path.string(), piece));
      }
    }
  }
  return v;
}

dgh::PresetSpec read_preset(const YAML::Node& node, const std::string& where,
                            const std::filesystem::path& base) {
  check_keys(node, {"preset", "amplitude", "width", "center", "offset", "samples_file"}, where);
  dgh::PresetSpec spec;
  if (node["samples_file"]) {
    spec.kind = dgh::PresetKind::from_samples;
    std::filesystem::path file = scalar<std::string>(node["samples_file"], where + ".samples_file");
    if (file.is_relative()) file = base / file;
    spec.samples = read_samples(file);
    return spec;
  }
  if (!node["preset"]) throw ConfigError(where + ": needs 'preset' or 'samples_file'");
  try {
    spec.kind = dgh::preset_kind(scalar<std::string>(node["preset"], where + ".preset"));
  } catch (const dgh::InvalidArgument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  read(node, "amplitude", spec.amplitude, where);
  read(node, "width", spec.width, where);
  read(node, "center", spec.center, where);
  read(node, "offset", spec.offset, where);
  return spec;
}

}  // namespace

const char* equation_name(Equation e) noexcept { return e == Equation::dgh ? "dgh" : "dgh2"; }

dgh::Parameters RunConfig::parameters() const {
  try {
    return dgh::Parameters::make(alpha, gamma, c0, sigma);
  } catch (const dgh::InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

dgh::Grid RunConfig::grid() const {
  try {
    return dgh::Grid(box_half_length(), n_points);
  } catch (const dgh::InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

void RunConfig::validate() const {
  const dgh::Parameters prm = parameters();
  const dgh::Grid g = grid();
  try {
    solver.validate();
  } catch (const dgh::InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (equation == Equation::dgh2 && !rho0) {
    throw ConfigError("equation dgh2 needs an initial.rho_tilde entry");
  }
  auto check_samples = [&](const dgh::PresetSpec& s, const char* what) {
    if (s.kind == dgh::PresetKind::from_samples && s.samples.size() != g.size()) {
      throw ConfigError(fmt::format("{} samples: {} values for a grid of {} points", what,
                                    s.samples.size(), g.size()));
    }
  };
  check_samples(u0, "initial.u");
  if (rho0) check_samples(*rho0, "initial.rho_tilde");
  if (workers < 1) throw ConfigError("workers must be at least 1");
  if (lemmas.random_fields < 0) throw ConfigError("lemmas.random_fields must be nonnegative");
  if (lemmas.resolutions.empty()) throw ConfigError("lemmas.resolutions must not be empty");
  (void)prm;
}

RunConfig load_config(const std::optional<std::filesystem::path>& path) {
  RunConfig c;
  if (!path) return c;
  if (!std::filesystem::is_regular_file(*path)) {
    throw ConfigError(fmt::format("config file not found: {}", path->string()));
  }
  YAML::Node root;
  try {
    root = YAML::LoadFile(path->string());
  } catch (const YAML::Exception& e) {
    throw ConfigError(fmt::format("{}: {}", path->string(), e.what()));
  }
  if (root.IsNull()) return c;
  const std::filesystem::path base = path->parent_path();
  check_keys(root,
             {"equation", "parameters", "grid", "solver", "initial", "characteristics",
              "criterion", "lemmas", "sweep", "seed", "workers", "out"},
             "config");

  if (root["equation"]) {
    const auto name = scalar<std::string>(root["equation"], "equation");
    if (name == "dgh") c.equation = Equation::dgh;
    else if (name == "dgh2") c.equation = Equation::dgh2;
    else throw ConfigError(fmt::format("equation: unknown value '{}'", name));
  }
  if (const auto p = root["parameters"]) {
    check_keys(p, {"alpha", "gamma", "c0", "sigma"}, "parameters");
    read(p, "alpha", c.alpha, "parameters");
    read(p, "gamma", c.gamma, "parameters");
    read(p, "c0", c.c0, "parameters");
    read(p, "sigma", c.sigma, "parameters");
  }
  if (const auto g = root["grid"]) {
    check_keys(g, {"L", "N"}, "grid");
    if (g["L"]) c.half_length = scalar<double>(g["L"], "grid.L");
    read(g, "N", c.n_points, "grid");
  }
  if (const auto s = root["solver"]) {
    check_keys(s, {"t_max", "cfl", "dt_min", "slope_blowup_threshold", "record_every",
                   "track_slopes"},
               "solver");
    read(s, "t_max", c.solver.t_max, "solver");
    read(s, "cfl", c.solver.cfl, "solver");
    read(s, "dt_min", c.solver.dt_min, "solver");
    read(s, "slope_blowup_threshold", c.solver.slope_blowup_threshold, "solver");
    read(s, "record_every", c.solver.record_every, "solver");
    read(s, "track_slopes", c.solver.track_slopes, "solver");
  }
  if (const auto i = root["initial"]) {
    check_keys(i, {"u", "rho_tilde"}, "initial");
    if (i["u"]) c.u0 = read_preset(i["u"], "initial.u", base);
    if (i["rho_tilde"]) c.rho0 = read_preset(i["rho_tilde"], "initial.rho_tilde", base);
  }
  if (const auto ch = root["characteristics"]) {
    check_keys(ch, {"seeds", "include_criterion_point"}, "characteristics");
    if (ch["seeds"]) c.seeds = list<double>(ch["seeds"], "characteristics.seeds");
    read(ch, "include_criterion_point", c.seed_criterion_point, "characteristics");
  }
  if (const auto cr = root["criterion"]) {
    check_keys(cr, {"rho_tol"}, "criterion");
    read(cr, "rho_tol", c.rho_tol, "criterion");
  }
  if (const auto l = root["lemmas"]) {
    check_keys(l, {"random_fields", "resolutions", "tolerance", "sobolev_tolerance",
                   "peakon_tolerance", "min_order"},
               "lemmas");
    read(l, "random_fields", c.lemmas.random_fields, "lemmas");
    if (l["resolutions"]) {
      c.lemmas.resolutions = list<std::size_t>(l["resolutions"], "lemmas.resolutions");
    }
    read(l, "tolerance", c.lemmas.tolerance, "lemmas");
    read(l, "sobolev_tolerance", c.lemmas.sobolev_tolerance, "lemmas");
    read(l, "peakon_tolerance", c.lemmas.peakon_tolerance, "lemmas");
    read(l, "min_order", c.lemmas.min_order, "lemmas");
  }
  if (const auto sw = root["sweep"]) {
    if (sw.IsMap()) {
      check_keys(sw, {"amplitude", "c0", "gamma"}, "sweep");
      if (sw["amplitude"]) c.sweep.amplitudes = list<double>(sw["amplitude"], "sweep.amplitude");
      if (sw["c0"]) c.sweep.c0 = list<double>(sw["c0"], "sweep.c0");
      if (sw["gamma"]) c.sweep.gamma = list<double>(sw["gamma"], "sweep.gamma");
    } else if (!sw.IsNull()) {
      throw ConfigError("sweep: expected a mapping of axes");
    }
  }
  read(root, "seed", c.rng_seed, "config");
  read(root, "workers", c.workers, "config");
  if (root["out"]) c.out_dir = scalar<std::string>(root["out"], "out");
  return c;
}

void apply_overrides(RunConfig& c, const Overrides& o) {
  if (o.out) c.out_dir = *o.out;
  if (o.seed) c.rng_seed = *o.seed;
  if (o.workers) c.workers = *o.workers;
  if (o.alpha) c.alpha = *o.alpha;
  if (o.gamma) c.gamma = *o.gamma;
  if (o.c0) c.c0 = *o.c0;
  if (o.half_length) c.half_length = *o.half_length;
  if (o.n_points) c.n_points = *o.n_points;
  if (o.t_max) c.solver.t_max = *o.t_max;
  if (o.cfl) c.solver.cfl = *o.cfl;
}

}  // namespace dghcli
