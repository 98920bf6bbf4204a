#include "gfl/serialize.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "field files are little-endian; big-endian hosts unsupported");

namespace gfl {

namespace {

void put_i32(std::ostream& os, std::int32_t v) {
  os.write(reinterpret_cast<const char*>(&v), 4);
}

void put_f64(std::ostream& os, double v) {
  os.write(reinterpret_cast<const char*>(&v), 8);
}

std::int32_t get_i32(std::istream& is) {
  std::int32_t v;
  is.read(reinterpret_cast<char*>(&v), 4);
  return v;
}

double get_f64(std::istream& is) {
  double v;
  is.read(reinterpret_cast<char*>(&v), 8);
  return v;
}

void write_header(std::ostream& os, const Lattice& lat, bool is_complex, bool is_vector) {
  os.write("GFL1", 4);
  put_i32(os, lat.dim());
  put_i32(os, lat.side());
  const std::uint8_t cf = is_complex ? 1 : 0, vf = is_vector ? 1 : 0;
  os.write(reinterpret_cast<const char*>(&cf), 1);
  os.write(reinterpret_cast<const char*>(&vf), 1);
}

void write_values(std::ostream& os, const std::vector<double>& v) {
  for (double x : v) put_f64(os, x);
}

void write_values(std::ostream& os, const std::vector<cplx>& v) {
  for (const cplx& x : v) {
    put_f64(os, x.real());
    put_f64(os, x.imag());
  }
}

template <class F>
void save_impl(std::ostream& os, const F& f, bool is_complex, bool is_vector) {
  write_header(os, f.lat, is_complex, is_vector);
  write_values(os, f.v);
  if (!os) throw std::runtime_error("field write failed");
}

template <class F>
void save_path(const std::string& path, const F& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  save_field(os, f);
}

}  // namespace

void save_field(std::ostream& os, const RealScalarField& f) { save_impl(os, f, false, false); }
void save_field(std::ostream& os, const RealVectorField& f) { save_impl(os, f, false, true); }
void save_field(std::ostream& os, const ComplexScalarField& f) { save_impl(os, f, true, false); }
void save_field(std::ostream& os, const ComplexVectorField& f) { save_impl(os, f, true, true); }

void save_field(const std::string& path, const RealScalarField& f) { save_path(path, f); }
void save_field(const std::string& path, const RealVectorField& f) { save_path(path, f); }
void save_field(const std::string& path, const ComplexScalarField& f) { save_path(path, f); }
void save_field(const std::string& path, const ComplexVectorField& f) { save_path(path, f); }

FieldFile load_field(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "GFL1", 4) != 0)
    throw std::runtime_error("not a GFL1 field file");
  FieldFile ff;
  ff.d = get_i32(is);
  ff.L = get_i32(is);
  std::uint8_t cf = 0, vf = 0;
  is.read(reinterpret_cast<char*>(&cf), 1);
  is.read(reinterpret_cast<char*>(&vf), 1);
  ff.is_complex = cf != 0;
  ff.is_vector = vf != 0;
  Lattice lat(ff.d, ff.L);
  std::size_t count = lat.n_sites();
  if (ff.is_vector) count *= static_cast<std::size_t>(ff.d);
  ff.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double re = get_f64(is);
    const double im = ff.is_complex ? get_f64(is) : 0.0;
    ff.values[i] = cplx(re, im);
  }
  if (!is) throw std::runtime_error("truncated GFL1 field file");
  return ff;
}

FieldFile load_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open field file: " + path);
  return load_field(is);
}

RealScalarField FieldFile::as_real_scalar() const {
  if (is_complex || is_vector) throw std::runtime_error("field file is not real scalar");
  RealScalarField f{Lattice(d, L)};
  for (std::size_t i = 0; i < values.size(); ++i) f.v[i] = values[i].real();
  return f;
}

RealVectorField FieldFile::as_real_vector() const {
  if (is_complex || !is_vector) throw std::runtime_error("field file is not real vector");
  RealVectorField f{Lattice(d, L)};
  for (std::size_t i = 0; i < values.size(); ++i) f.v[i] = values[i].real();
  return f;
}

ComplexScalarField FieldFile::as_complex_scalar() const {
  if (is_vector) throw std::runtime_error("field file is not scalar");
  ComplexScalarField f{Lattice(d, L)};
  f.v = values;
  return f;
}

ComplexVectorField FieldFile::as_complex_vector() const {
  if (!is_vector) throw std::runtime_error("field file is not vector");
  ComplexVectorField f{Lattice(d, L)};
  f.v = values;
  return f;
}

}  // namespace gfl
