#pragma once

#include <optional>
#include <string>

#include "greenop/field.hpp"

namespace greenop {

// GOF1: one JSON header line, then interleaved little-endian float64 (re, im)
// pairs in t-major order. Spatial fields carry "Nt": 1.
void write_field(const std::string& path, const Field& u);
Field read_field(const std::string& path);
void write_spatial_field(const std::string& path, const SpatialField& u);
// The time extent of the attached grid is taken from `like` when given.
SpatialField read_spatial_field(const std::string& path,
                                const std::optional<SpaceTimeGrid>& like = std::nullopt);

namespace io_detail {
void write_pairs(std::ostream& os, const cplx* data, std::size_t count);
void read_pairs(std::istream& is, cplx* data, std::size_t count);
}  // namespace io_detail

}  // namespace greenop
