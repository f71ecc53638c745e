#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <string>

#include "greenop/coefficients.hpp"
#include "greenop/solver.hpp"

namespace greenop::cli {

// Manifest or argument errors; the CLI exits with status 2.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunManifest {
  std::string command;
  SpaceTimeGrid grid;
  nlohmann::json coefficients;  // {manifest: path} or a generator spec
  SolverConfig solver;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::filesystem::path base;  // directory of the manifest file
  std::filesystem::path out;
};

inline const char* const commands[] = {"verify", "green", "cauchy", "offdiag", "gaussian",
                                       "coulomb", "gn",    "norms",  "solve"};

bool known_command(const std::string& name);

// Validates and converts; relative paths resolve against `base`.
RunManifest parse_manifest(const nlohmann::json& j, const std::filesystem::path& base);
RunManifest load_manifest(const std::string& path);

// Named generators: identity, random_elliptic, random_lower_order, coulomb,
// checkerboard. Seeds default to streams of the root seed.
CoefficientSet generate_coefficients(const nlohmann::json& spec, const SpaceTimeGrid& g,
                                     std::uint64_t root_seed);
CoefficientSet load_coefficients(const RunManifest& m);

std::filesystem::path resolve(const RunManifest& m, const std::string& p);

// Typed parameter access with defaults; wrong types raise SchemaError.
double param(const nlohmann::json& p, const char* key, double fallback);
int param(const nlohmann::json& p, const char* key, int fallback);
std::string param(const nlohmann::json& p, const char* key, const std::string& fallback);
bool param(const nlohmann::json& p, const char* key, bool fallback);
std::vector<double> param_list(const nlohmann::json& p, const char* key,
                               const std::vector<double>& fallback);

}  // namespace greenop::cli
