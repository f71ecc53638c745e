#include "greenop/coefficients.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "greenop/error.hpp"
#include "greenop/field_io.hpp"

namespace greenop {

CoeffField CoeffField::constant(cplx c) {
  CoeffField f;
  f.storage_ = Storage::constant;
  f.value_ = c;
  return f;
}

CoeffField CoeffField::spatial(const SpatialField& s) {
  CoeffField f;
  f.storage_ = Storage::spatial;
  f.S_ = s.size();
  f.data_ = s.data;
  return f;
}

CoeffField CoeffField::full(const Field& u) {
  CoeffField f;
  f.storage_ = Storage::full;
  f.S_ = u.grid.spatial_size();
  f.data_ = u.data;
  return f;
}

kernels::CoefView CoeffField::view() const {
  switch (storage_) {
    case Storage::constant: return {nullptr, 0, value_};
    case Storage::spatial: return {data_.data(), 0, 0.0};
    default: return {data_.data(), S_, 0.0};
  }
}

Field CoeffField::to_field(const SpaceTimeGrid& g) const {
  Field u(g);
  const std::size_t S = g.spatial_size();
  for (int j = 0; j < g.Nt; ++j)
    for (std::size_t x = 0; x < S; ++x) u(j, x) = at(j, x);
  return u;
}

cplx CoeffField::mean(const SpaceTimeGrid& g) const {
  if (storage_ == Storage::constant) return value_;
  cplx s = 0.0;
  for (const auto& z : data_) s += z;
  (void)g;
  return s / static_cast<double>(data_.size());
}

double CoeffField::max_abs() const {
  if (storage_ == Storage::constant) return std::abs(value_);
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

CoefficientSet CoefficientSet::identity(const SpaceTimeGrid& g) {
  CoefficientSet c;
  c.grid = g;
  const int n = g.n;
  c.A.resize(n * n);
  for (int i = 0; i < n; ++i) c.A[i * n + i] = CoeffField::constant(1.0);
  c.avec.resize(n);
  c.bvec.resize(n);
  return c;
}

bool CoefficientSet::has_lower_order() const {
  for (const auto& f : avec)
    if (!f.is_zero()) return true;
  for (const auto& f : bvec)
    if (!f.is_zero()) return true;
  return !a0.is_zero();
}

void validate(const CoefficientSet& c) {
  const int n = c.grid.n;
  require(static_cast<int>(c.A.size()) == n * n && static_cast<int>(c.avec.size()) == n &&
              static_cast<int>(c.bvec.size()) == n,
          ErrorKind::invalid_argument, "coefficient component counts do not match n");
  auto check = [&](const CoeffField& f) {
    require(std::isfinite(f.max_abs()), ErrorKind::invalid_argument,
            "coefficient has non-finite entries");
  };
  for (const auto& f : c.A) check(f);
  for (const auto& f : c.avec) check(f);
  for (const auto& f : c.bvec) check(f);
  check(c.a0);
}

namespace {

CoeffField load_component(const std::filesystem::path& base, const std::string& rel,
                          const SpaceTimeGrid* g) {
  const auto p = std::filesystem::path(rel).is_absolute() ? std::filesystem::path(rel) : base / rel;
  Field f = read_field(p.string());
  if (g) check_same_grid(*g, f.grid);
  return CoeffField::full(f);
}

}  // namespace

CoefficientSet read_coefficients(const std::string& manifest_path) {
  std::ifstream is(manifest_path);
  require(is.good(), ErrorKind::io, "cannot open coefficient manifest " + manifest_path);
  nlohmann::json m;
  try {
    m = nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::io, "bad coefficient manifest: " + std::string(e.what()));
  }
  const auto base = std::filesystem::path(manifest_path).parent_path();
  require(m.contains("A") && m["A"].is_array() && !m["A"].empty(), ErrorKind::invalid_argument,
          "coefficient manifest needs a non-empty A array");
  CoefficientSet c;
  const Field first = read_field((base / m["A"][0].get<std::string>()).string());
  c.grid = first.grid;
  const int n = c.grid.n;
  require(static_cast<int>(m["A"].size()) == n * n, ErrorKind::invalid_argument,
          "A must list n*n component files");
  c.A.push_back(CoeffField::full(first));
  for (int k = 1; k < n * n; ++k) c.A.push_back(load_component(base, m["A"][k], &c.grid));
  c.avec.resize(n);
  c.bvec.resize(n);
  for (const char* key : {"avec", "bvec"}) {
    if (!m.contains(key)) continue;
    require(m[key].is_array() && static_cast<int>(m[key].size()) == n,
            ErrorKind::invalid_argument, std::string(key) + " must list n component files");
    auto& dst = std::string(key) == "avec" ? c.avec : c.bvec;
    for (int k = 0; k < n; ++k) dst[k] = load_component(base, m[key][k], &c.grid);
  }
  if (m.contains("a0")) c.a0 = load_component(base, m["a0"], &c.grid);
  validate(c);
  return c;
}

void write_coefficients(const std::string& manifest_path, const CoefficientSet& c) {
  const auto path = std::filesystem::path(manifest_path);
  const auto base = path.parent_path();
  const auto stem = path.stem().string();
  nlohmann::json m;
  auto put = [&](const CoeffField& f, const std::string& name) {
    const std::string file = stem + "_" + name + ".gof";
    write_field((base / file).string(), f.to_field(c.grid));
    return file;
  };
  const int n = c.grid.n;
  m["A"] = nlohmann::json::array();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m["A"].push_back(put(c.Aij(i, j), "A" + std::to_string(i) + std::to_string(j)));
  m["avec"] = nlohmann::json::array();
  m["bvec"] = nlohmann::json::array();
  for (int i = 0; i < n; ++i) {
    m["avec"].push_back(put(c.avec[i], "a" + std::to_string(i)));
    m["bvec"].push_back(put(c.bvec[i], "b" + std::to_string(i)));
  }
  m["a0"] = put(c.a0, "a0");
  std::ofstream os(manifest_path);
  require(os.good(), ErrorKind::io, "cannot write " + manifest_path);
  os << m.dump(2) << '\n';
}

Field squared_magnitude(const std::vector<CoeffField>& v, const SpaceTimeGrid& g) {
  Field out(g);
  const std::size_t S = g.spatial_size();
  for (int j = 0; j < g.Nt; ++j)
    for (std::size_t x = 0; x < S; ++x) {
      double s = 0.0;
      for (const auto& f : v) s += std::norm(f.at(j, x));
      out(j, x) = s;
    }
  return out;
}

}  // namespace greenop
