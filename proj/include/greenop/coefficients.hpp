#pragma once

#include <string>
#include <vector>

#include "greenop/field.hpp"
#include "greenop/kernels.hpp"

namespace greenop {

// One coefficient component. Samples live on every lattice point; storage is
// compressed when the component is constant or independent of time.
class CoeffField {
 public:
  enum class Storage { constant, spatial, full };

  CoeffField() = default;
  static CoeffField constant(cplx c);
  static CoeffField spatial(const SpatialField& s);
  static CoeffField full(const Field& f);

  Storage storage() const { return storage_; }
  bool is_zero() const { return storage_ == Storage::constant && value_ == cplx(0.0); }
  cplx at(std::size_t t, std::size_t x) const {
    switch (storage_) {
      case Storage::constant: return value_;
      case Storage::spatial: return data_[x];
      default: return data_[t * S_ + x];
    }
  }
  kernels::CoefView view() const;
  Field to_field(const SpaceTimeGrid& g) const;
  cplx mean(const SpaceTimeGrid& g) const;
  double max_abs() const;

 private:
  Storage storage_ = Storage::constant;
  cplx value_ = 0.0;
  std::size_t S_ = 0;
  std::vector<cplx> data_;
};

// Coefficients of L u = -div(A grad u + a u) + b . grad u + a0 u.
struct CoefficientSet {
  SpaceTimeGrid grid;
  std::vector<CoeffField> A;  // n*n, row-major
  std::vector<CoeffField> avec;
  std::vector<CoeffField> bvec;
  CoeffField a0;

  static CoefficientSet identity(const SpaceTimeGrid& g);
  const CoeffField& Aij(int i, int j) const { return A[i * grid.n + j]; }
  bool has_lower_order() const;
};

void validate(const CoefficientSet& c);

// Manifest {A: [paths n*n], avec: [paths], bvec: [paths], a0: path}; relative
// paths resolve against the manifest directory.
CoefficientSet read_coefficients(const std::string& manifest_path);
// Writes one GOF1 file per component next to the manifest.
void write_coefficients(const std::string& manifest_path, const CoefficientSet& c);

// Pointwise |a|^2 as a field (sum of squared moduli of the components).
Field squared_magnitude(const std::vector<CoeffField>& v, const SpaceTimeGrid& g);

}  // namespace greenop
