#include "greenop/manifest.hpp"

#include <algorithm>
#include <fstream>

#include "greenop/error.hpp"
#include "greenop/exponents.hpp"
#include "greenop/generators.hpp"
#include "greenop/rng.hpp"

namespace greenop::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& what) { throw SchemaError(what); }

void require_object(const json& j, const char* what) {
  if (!j.is_object()) schema(std::string(what) + " must be an object");
}

void only_keys(const json& j, std::initializer_list<const char*> keys, const char* what) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; }))
      schema(std::string("unknown key '") + it.key() + "' in " + what);
}

template <class T>
T get(const json& j, const char* key, const char* what) {
  if (!j.contains(key)) schema(std::string(what) + " needs '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    schema(std::string(what) + "." + key + " has the wrong type");
  }
}

std::uint64_t seed_of(const json& j, const char* key, std::uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_unsigned()) schema(std::string(key) + " must be a nonnegative integer");
  return j.at(key).get<std::uint64_t>();
}

SpaceTimeGrid parse_grid(const json& j) {
  require_object(j, "grid");
  only_keys(j, {"n", "Nx", "Lx", "Nt", "Lt"}, "grid");
  try {
    return make_grid(get<int>(j, "n", "grid"), get<int>(j, "Nx", "grid"),
                     get<double>(j, "Lx", "grid"), get<int>(j, "Nt", "grid"),
                     get<double>(j, "Lt", "grid"));
  } catch (const Error& e) {
    schema(std::string("grid: ") + e.what());
  }
}

SolverConfig parse_solver(const json& j) {
  SolverConfig cfg;
  if (j.is_null()) return cfg;
  require_object(j, "solver");
  only_keys(j, {"kappa", "delta", "tol", "max_iter", "mode", "scheme", "restart", "seed"},
            "solver");
  cfg.kappa = param(j, "kappa", cfg.kappa);
  cfg.delta = param(j, "delta", cfg.delta);
  cfg.tol = param(j, "tol", cfg.tol);
  cfg.max_iter = param(j, "max_iter", cfg.max_iter);
  cfg.restart = param(j, "restart", cfg.restart);
  cfg.seed = seed_of(j, "seed", cfg.seed);
  const std::string mode = param(j, "mode", std::string("homogeneous"));
  if (mode == "homogeneous")
    cfg.mode = NormMode::homogeneous;
  else if (mode == "inhomogeneous")
    cfg.mode = NormMode::inhomogeneous;
  else
    schema("solver.mode must be homogeneous or inhomogeneous");
  const std::string scheme = param(j, "scheme", std::string("spectral"));
  if (scheme == "spectral")
    cfg.scheme = TimeScheme::spectral;
  else if (scheme == "causal_euler")
    cfg.scheme = TimeScheme::causal_euler;
  else
    schema("solver.scheme must be spectral or causal_euler");
  if (!(cfg.tol > 0.0) || cfg.max_iter < 1 || cfg.kappa < 0.0)
    schema("solver needs tol > 0, max_iter >= 1 and kappa >= 0");
  return cfg;
}

ExponentPair parse_pair(const json& j) {
  if (!j.is_array() || j.size() != 2) schema("pair must be [r, q]");
  auto one = [](const json& v) {
    try {
      if (v.is_string()) return Exponent::parse(v.get<std::string>());
      if (v.is_number()) return Exponent::from_double(v.get<double>());
    } catch (const Error& e) {
      schema(std::string("pair: ") + e.what());
    }
    schema("pair entries must be numbers or strings");
  };
  return {one(j[0]), one(j[1])};
}

cplx parse_complex(const json& j, const char* key, cplx fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  schema(std::string(key) + " must be a number or [re, im]");
}

}  // namespace

bool known_command(const std::string& name) {
  return std::any_of(std::begin(commands), std::end(commands),
                     [&](const char* c) { return name == c; });
}

double param(const json& p, const char* key, double fallback) {
  if (!p.contains(key)) return fallback;
  if (!p.at(key).is_number()) schema(std::string(key) + " must be a number");
  return p.at(key).get<double>();
}

int param(const json& p, const char* key, int fallback) {
  if (!p.contains(key)) return fallback;
  if (!p.at(key).is_number_integer()) schema(std::string(key) + " must be an integer");
  return p.at(key).get<int>();
}

std::string param(const json& p, const char* key, const std::string& fallback) {
  if (!p.contains(key)) return fallback;
  if (!p.at(key).is_string()) schema(std::string(key) + " must be a string");
  return p.at(key).get<std::string>();
}

bool param(const json& p, const char* key, bool fallback) {
  if (!p.contains(key)) return fallback;
  if (!p.at(key).is_boolean()) schema(std::string(key) + " must be a boolean");
  return p.at(key).get<bool>();
}

std::vector<double> param_list(const json& p, const char* key,
                               const std::vector<double>& fallback) {
  if (!p.contains(key)) return fallback;
  const auto& v = p.at(key);
  if (!v.is_array()) schema(std::string(key) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) schema(std::string(key) + " must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

RunManifest parse_manifest(const json& j, const fs::path& base) {
  require_object(j, "manifest");
  only_keys(j, {"command", "grid", "coefficients", "solver", "params", "seed", "out"}, "manifest");
  RunManifest m;
  m.base = base;
  m.command = get<std::string>(j, "command", "manifest");
  if (!known_command(m.command)) schema("unknown command '" + m.command + "'");
  m.grid = parse_grid(j.contains("grid") ? j.at("grid") : json());
  m.solver = parse_solver(j.contains("solver") ? j.at("solver") : json());
  m.seed = seed_of(j, "seed", 0);
  if (j.contains("params")) {
    require_object(j.at("params"), "params");
    m.params = j.at("params");
  }
  m.coefficients = j.contains("coefficients") ? j.at("coefficients") : json{{"generator", "identity"}};
  require_object(m.coefficients, "coefficients");
  if (m.coefficients.contains("manifest")) {
    const auto p = resolve(m, get<std::string>(m.coefficients, "manifest", "coefficients"));
    if (!fs::exists(p)) schema("coefficient manifest not found: " + p.string());
  } else if (!m.coefficients.contains("generator")) {
    schema("coefficients need 'manifest' or 'generator'");
  }
  m.out = j.contains("out") ? resolve(m, get<std::string>(j, "out", "manifest")) : fs::path("out");
  return m;
}

RunManifest load_manifest(const std::string& path) {
  std::ifstream is(path);
  if (!is) schema("cannot open manifest " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    schema(std::string("manifest is not valid JSON: ") + e.what());
  }
  return parse_manifest(j, fs::absolute(path).parent_path());
}

fs::path resolve(const RunManifest& m, const std::string& p) {
  const fs::path q(p);
  return q.is_absolute() ? q : m.base / q;
}

CoefficientSet generate_coefficients(const json& spec, const SpaceTimeGrid& g,
                                     std::uint64_t root_seed) {
  require_object(spec, "coefficients");
  const auto name = get<std::string>(spec, "generator", "coefficients");
  try {
    if (name == "identity") {
      only_keys(spec, {"generator"}, "identity");
      return CoefficientSet::identity(g);
    }
    if (name == "random_elliptic") {
      only_keys(spec,
                {"generator", "seed", "lambda", "Lambda", "real", "symmetric", "time_dependent",
                 "kx", "kt"},
                "random_elliptic");
      EllipticOptions opt;
      opt.real = param(spec, "real", opt.real);
      opt.symmetric = param(spec, "symmetric", opt.symmetric);
      opt.time_dependent = param(spec, "time_dependent", opt.time_dependent);
      opt.kx = param(spec, "kx", opt.kx);
      opt.kt = param(spec, "kt", opt.kt);
      return random_elliptic(g, get<double>(spec, "lambda", "random_elliptic"),
                             get<double>(spec, "Lambda", "random_elliptic"),
                             seed_of(spec, "seed", sub_seed(root_seed, 1)), opt);
    }
    if (name == "random_lower_order") {
      only_keys(spec,
                {"generator", "seed", "P_target", "pair", "base", "lorentz", "drift_a", "drift_b",
                 "potential", "kx", "kt"},
                "random_lower_order");
      const auto base = spec.contains("base")
                            ? generate_coefficients(spec.at("base"), g, root_seed)
                            : CoefficientSet::identity(g);
      LowerOrderOptions opt;
      opt.lorentz = param(spec, "lorentz", opt.lorentz);
      opt.drift_a = param(spec, "drift_a", opt.drift_a);
      opt.drift_b = param(spec, "drift_b", opt.drift_b);
      opt.potential = param(spec, "potential", opt.potential);
      opt.kx = param(spec, "kx", opt.kx);
      opt.kt = param(spec, "kt", opt.kt);
      if (!spec.contains("pair")) schema("random_lower_order needs 'pair'");
      return random_lower_order(base, get<double>(spec, "P_target", "random_lower_order"),
                                parse_pair(spec.at("pair")),
                                seed_of(spec, "seed", sub_seed(root_seed, 2)), opt);
    }
    if (name == "coulomb") {
      only_keys(spec, {"generator", "c", "M"}, "coulomb");
      const double M = param(spec, "M", 0.0);
      return coulomb(g, parse_complex(spec, "c", -0.1), M > 0.0 ? M : coulomb_default_cap(g));
    }
    if (name == "checkerboard") {
      only_keys(spec, {"generator", "contrast"}, "checkerboard");
      return checkerboard(g, get<double>(spec, "contrast", "checkerboard"));
    }
  } catch (const Error& e) {
    schema(name + ": " + e.what());
  }
  schema("unknown generator '" + name + "'");
}

CoefficientSet load_coefficients(const RunManifest& m) {
  if (!m.coefficients.contains("manifest")) return generate_coefficients(m.coefficients, m.grid, m.seed);
  const auto path = resolve(m, m.coefficients.at("manifest").get<std::string>());
  CoefficientSet c;
  try {
    c = read_coefficients(path.string());
  } catch (const Error& e) {
    schema(std::string("coefficients: ") + e.what());
  }
  if (c.grid.n != m.grid.n || c.grid.Nx != m.grid.Nx || c.grid.Nt != m.grid.Nt)
    schema("coefficient lattice does not match the manifest grid");
  return c;
}

}  // namespace greenop::cli
