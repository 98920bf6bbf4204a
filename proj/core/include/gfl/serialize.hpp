#pragma once

#include "gfl/lattice.hpp"

#include <iosfwd>
#include <string>

namespace gfl {

// Field file format "GFL1": magic "GFL1", int32 d, int32 L, uint8 complex
// flag, uint8 vector flag, then float64 values little-endian in row-major
// site order, vector components innermost, complex as (re, im) pairs.

void save_field(std::ostream& os, const RealScalarField& f);
void save_field(std::ostream& os, const RealVectorField& f);
void save_field(std::ostream& os, const ComplexScalarField& f);
void save_field(std::ostream& os, const ComplexVectorField& f);

void save_field(const std::string& path, const RealScalarField& f);
void save_field(const std::string& path, const RealVectorField& f);
void save_field(const std::string& path, const ComplexScalarField& f);
void save_field(const std::string& path, const ComplexVectorField& f);

struct FieldFile {
  int d = 0;
  int L = 0;
  bool is_complex = false;
  bool is_vector = false;
  std::vector<cplx> values;  // real fields load with zero imaginary part

  RealScalarField as_real_scalar() const;
  RealVectorField as_real_vector() const;
  ComplexScalarField as_complex_scalar() const;
  ComplexVectorField as_complex_vector() const;
};

FieldFile load_field(std::istream& is);
FieldFile load_field(const std::string& path);

}  // namespace gfl
