#include "greenop/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <json.hpp>

#include "greenop/error.hpp"

namespace greenop {

namespace io_detail {

namespace {

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    return __builtin_bswap64(v);
  }
  return v;
}

}  // namespace

void write_pairs(std::ostream& os, const cplx* data, std::size_t count) {
  std::vector<std::uint64_t> buf(2 * count);
  for (std::size_t i = 0; i < count; ++i) {
    const double re = data[i].real();
    const double im = data[i].imag();
    std::uint64_t a, b;
    std::memcpy(&a, &re, 8);
    std::memcpy(&b, &im, 8);
    buf[2 * i] = to_le(a);
    buf[2 * i + 1] = to_le(b);
  }
  os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * 8));
  require(os.good(), ErrorKind::io, "write failed");
}

void read_pairs(std::istream& is, cplx* data, std::size_t count) {
  std::vector<std::uint64_t> buf(2 * count);
  is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * 8));
  require(static_cast<std::size_t>(is.gcount()) == buf.size() * 8, ErrorKind::io,
          "truncated payload");
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t a = to_le(buf[2 * i]);
    const std::uint64_t b = to_le(buf[2 * i + 1]);
    double re, im;
    std::memcpy(&re, &a, 8);
    std::memcpy(&im, &b, 8);
    data[i] = cplx(re, im);
  }
}

}  // namespace io_detail

namespace {

nlohmann::json header(const SpaceTimeGrid& g, int Nt) {
  return nlohmann::json{{"magic", "GOF1"}, {"n", g.n},       {"Nx", g.Nx},
                        {"Nt", Nt},        {"Lx", g.Lx},     {"Lt", g.Lt},
                        {"layout", "t-major"}, {"scalar", "complex-f64-le"}};
}

nlohmann::json read_header(std::istream& is, const std::string& path) {
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), ErrorKind::io, "empty file: " + path);
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::io, "bad header in " + path + ": " + e.what());
  }
  require(h.value("magic", "") == "GOF1", ErrorKind::io, "not a GOF1 file: " + path);
  require(h.value("layout", "") == "t-major" && h.value("scalar", "") == "complex-f64-le",
          ErrorKind::io, "unsupported layout in " + path);
  return h;
}

}  // namespace

void write_field(const std::string& path, const Field& u) {
  std::ofstream os(path, std::ios::binary);
  require(os.good(), ErrorKind::io, "cannot open " + path);
  os << header(u.grid, u.grid.Nt).dump() << '\n';
  io_detail::write_pairs(os, u.data.data(), u.size());
}

Field read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(is.good(), ErrorKind::io, "cannot open " + path);
  const auto h = read_header(is, path);
  const SpaceTimeGrid g = make_grid(h.at("n"), h.at("Nx"), h.at("Lx"), h.at("Nt"), h.at("Lt"));
  Field u(g);
  io_detail::read_pairs(is, u.data.data(), u.size());
  check_finite(u);
  return u;
}

void write_spatial_field(const std::string& path, const SpatialField& u) {
  std::ofstream os(path, std::ios::binary);
  require(os.good(), ErrorKind::io, "cannot open " + path);
  os << header(u.grid, 1).dump() << '\n';
  io_detail::write_pairs(os, u.data.data(), u.size());
}

SpatialField read_spatial_field(const std::string& path, const std::optional<SpaceTimeGrid>& like) {
  std::ifstream is(path, std::ios::binary);
  require(is.good(), ErrorKind::io, "cannot open " + path);
  const auto h = read_header(is, path);
  require(h.at("Nt").get<int>() == 1, ErrorKind::io, "expected a spatial field (Nt = 1): " + path);
  SpaceTimeGrid g;
  if (like) {
    require(like->n == h.at("n").get<int>() && like->Nx == h.at("Nx").get<int>() &&
                like->Lx == h.at("Lx").get<double>(),
            ErrorKind::grid_mismatch, "spatial field does not match the grid: " + path);
    g = *like;
  } else {
    g = make_grid(h.at("n"), h.at("Nx"), h.at("Lx"), 8, h.value("Lt", 1.0));
  }
  SpatialField u(g);
  io_detail::read_pairs(is, u.data.data(), u.size());
  check_finite(u);
  return u;
}

}  // namespace greenop
