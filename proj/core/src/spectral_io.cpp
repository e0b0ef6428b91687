#include "nlslab/spectral_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace nlslab {

namespace {

static_assert(std::endian::native == std::endian::little, "container format assumes a little-endian host");

template <class T>
void put(std::ostream& os, T value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) throw std::runtime_error("spectral container: truncated input");
  return value;
}

void write_container(std::ostream& os, const Grid2D& g, std::span<const cplx> data) {
  os.write("NLS2", 4);
  put<std::uint32_t>(os, kContainerVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(g.modes));
  put<double>(os, g.length);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(g.cutoff));
  for (const auto& c : data) {
    put<double>(os, c.real());
    put<double>(os, c.imag());
  }
  if (!os) throw std::runtime_error("spectral container: write failed");
}

std::pair<Grid2D, std::vector<cplx>> read_container(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "NLS2", 4) != 0) throw std::runtime_error("spectral container: bad magic");
  const auto version = get<std::uint32_t>(is);
  if (version != kContainerVersion)
    throw std::runtime_error("spectral container: unsupported version " + std::to_string(version));
  Grid2D g;
  g.modes = static_cast<int>(get<std::uint32_t>(is));
  g.length = get<double>(is);
  g.cutoff = static_cast<int>(get<std::uint32_t>(is));
  g.validate();
  std::vector<cplx> data(g.size());
  for (auto& c : data) {
    const double re = get<double>(is);
    const double im = get<double>(is);
    c = {re, im};
  }
  return {g, std::move(data)};
}

}  // namespace

void write_spectrum(std::ostream& os, const Spectrum& spectrum) {
  write_container(os, spectrum.grid(), spectrum.coeffs());
}

Spectrum read_spectrum(std::istream& is) {
  auto [g, data] = read_container(is);
  return Spectrum(g, std::move(data));
}

void write_field(std::ostream& os, const Field& field) { write_container(os, field.grid(), field.values()); }

Field read_field(std::istream& is) {
  auto [g, data] = read_container(is);
  return Field(g, std::move(data));
}

void save_spectrum(const std::filesystem::path& path, const Spectrum& spectrum) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_spectrum(os, spectrum);
}

Spectrum load_spectrum(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return read_spectrum(is);
}

void save_field(const std::filesystem::path& path, const Field& field) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_field(os, field);
}

Field load_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return read_field(is);
}

void write_spectrum_csv(std::ostream& os, const Spectrum& spectrum) {
  const auto old_precision = os.precision(17);
  os << "k1,k2,re,im\n";
  spectrum.for_each_mode([&](int k1, int k2, const cplx& c) {
    os << k1 << ',' << k2 << ',' << c.real() << ',' << c.imag() << '\n';
  });
  os.precision(old_precision);
}

}  // namespace nlslab
