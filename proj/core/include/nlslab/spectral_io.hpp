#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "nlslab/grid.hpp"

namespace nlslab {

// Flat binary container shared by spectra and fields:
//   char[4] "NLS2" | u32 version | u32 M | f64 L | u32 K | M*M x (f64 re, f64 im)
// All values little-endian, payload row-major in storage order.
inline constexpr std::uint32_t kContainerVersion = 1;

void write_spectrum(std::ostream& os, const Spectrum& spectrum);
Spectrum read_spectrum(std::istream& is);
void write_field(std::ostream& os, const Field& field);
Field read_field(std::istream& is);

void save_spectrum(const std::filesystem::path& path, const Spectrum& spectrum);
Spectrum load_spectrum(const std::filesystem::path& path);
void save_field(const std::filesystem::path& path, const Field& field);
Field load_field(const std::filesystem::path& path);

/// Debug dump: header "k1,k2,re,im", one row per stored mode.
void write_spectrum_csv(std::ostream& os, const Spectrum& spectrum);

}  // namespace nlslab
