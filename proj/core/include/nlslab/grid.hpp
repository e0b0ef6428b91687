#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace nlslab {

using cplx = std::complex<double>;
using Vec2 = std::array<double, 2>;

/// Periodic box [0, L)^2 sampled on M x M collocation points.
///
/// Wavenumbers are integer vectors k with components in [-M/2, M/2); the
/// physical frequency is xi_k = (2 pi / L) k. Nonlinear products keep only
/// modes with |k|_inf <= K (the retained band).
struct Grid2D {
  int modes = 64;
  double length = 2.0 * std::numbers::pi;
  int cutoff = 21;

  /// Builds and validates a grid; K defaults to floor(M/3).
  static Grid2D make(int modes, double length = 2.0 * std::numbers::pi,
                     std::optional<int> cutoff = std::nullopt);

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;

  double freq_scale() const { return 2.0 * std::numbers::pi / length; }
  double spacing() const { return length / modes; }
  std::size_t size() const { return static_cast<std::size_t>(modes) * modes; }

  int wavenumber(int index) const { return index < modes / 2 ? index : index - modes; }
  int index_of(int k) const { return k >= 0 ? k : k + modes; }
  bool retained(int k1, int k2) const {
    return k1 >= -cutoff && k1 <= cutoff && k2 >= -cutoff && k2 <= cutoff;
  }
  /// Largest retained physical frequency along an axis, K * 2 pi / L.
  double retained_xi_max() const { return cutoff * freq_scale(); }

  friend bool operator==(const Grid2D&, const Grid2D&) = default;
};

/// Complex function on the collocation points, row-major (x1 slow, x2 fast).
class Field {
 public:
  Field() = default;
  explicit Field(const Grid2D& grid);
  Field(const Grid2D& grid, std::vector<cplx> values);

  const Grid2D& grid() const { return grid_; }
  std::span<cplx> values() { return values_; }
  std::span<const cplx> values() const { return values_; }

  cplx& at(int j1, int j2) { return values_[static_cast<std::size_t>(j1) * grid_.modes + j2]; }
  cplx at(int j1, int j2) const { return values_[static_cast<std::size_t>(j1) * grid_.modes + j2]; }

  /// Physical coordinate of collocation index j along either axis.
  double coordinate(int j) const { return j * grid_.spacing(); }

 private:
  Grid2D grid_{};
  std::vector<cplx> values_;
};

/// Fourier coefficients c(k) = (1/L^2) \int_box u(x) e^{-i xi_k . x} dx.
///
/// Storage follows FFT ordering: entry (i1, i2) holds wavenumber
/// (grid.wavenumber(i1), grid.wavenumber(i2)).
class Spectrum {
 public:
  Spectrum() = default;
  explicit Spectrum(const Grid2D& grid);
  Spectrum(const Grid2D& grid, std::vector<cplx> coeffs);

  const Grid2D& grid() const { return grid_; }
  std::span<cplx> coeffs() { return coeffs_; }
  std::span<const cplx> coeffs() const { return coeffs_; }

  cplx& at(int k1, int k2) { return coeffs_[offset(k1, k2)]; }
  cplx at(int k1, int k2) const { return coeffs_[offset(k1, k2)]; }

  Vec2 xi(int k1, int k2) const {
    return {k1 * grid_.freq_scale(), k2 * grid_.freq_scale()};
  }

  /// Zeroes every mode outside the retained band.
  void dealias();
  bool is_dealiased() const;
  /// Largest |k|_inf carrying a nonzero coefficient (0 for the zero spectrum).
  int support_radius() const;

  Spectrum& operator+=(const Spectrum& other);
  Spectrum& operator*=(cplx factor);
  friend Spectrum operator+(Spectrum a, const Spectrum& b) { return a += b; }
  friend Spectrum operator*(cplx f, Spectrum a) { return a *= f; }

  /// Visits every stored mode as fn(k1, k2, coeff&).
  template <class Fn>
  void for_each_mode(Fn&& fn) {
    for (int i1 = 0; i1 < grid_.modes; ++i1)
      for (int i2 = 0; i2 < grid_.modes; ++i2)
        fn(grid_.wavenumber(i1), grid_.wavenumber(i2),
           coeffs_[static_cast<std::size_t>(i1) * grid_.modes + i2]);
  }
  template <class Fn>
  void for_each_mode(Fn&& fn) const {
    for (int i1 = 0; i1 < grid_.modes; ++i1)
      for (int i2 = 0; i2 < grid_.modes; ++i2)
        fn(grid_.wavenumber(i1), grid_.wavenumber(i2),
           coeffs_[static_cast<std::size_t>(i1) * grid_.modes + i2]);
  }

 private:
  std::size_t offset(int k1, int k2) const {
    return static_cast<std::size_t>(grid_.index_of(k1)) * grid_.modes + grid_.index_of(k2);
  }

  Grid2D grid_{};
  std::vector<cplx> coeffs_;
};

Spectrum forward_transform(const Field& field);
Field inverse_transform(const Spectrum& spectrum);

/// ||u||_{L^2(box)} from the coefficients, (L^2 sum |c|^2)^{1/2}.
double mass(const Spectrum& spectrum);
double mass(const Field& u);
/// Same norm by collocation quadrature, ((L/M)^2 sum |u_j|^2)^{1/2}.
double mass_quadrature(const Field& u);

/// \int_box |u|^4 dx for the trigonometric polynomial carried by the
/// spectrum. Evaluated on a padded grid large enough to be alias-free.
double quartic_integral(const Spectrum& spectrum);

/// E(u) = \int 1/2 |grad u|^2 + (sign/4) |u|^4. sign = +1 is defocusing.
double energy(const Spectrum& spectrum, int sign = +1);
double energy(const Field& u, int sign = +1);

double sobolev_norm(const Spectrum& spectrum, double s, bool homogeneous);

/// Smallest even size with only 2,3,5 factors that is >= min_size.
int fft_friendly_size(int min_size);

/// Padded grid size on which products of `degree` factors supported in
/// |k|_inf <= radius are computed without aliasing.
int product_grid_size(int radius, int degree = 4);

/// Samples the trigonometric polynomial on a padded P x P grid
/// (requires support_radius() < P / 2).
std::vector<cplx> sample_on_grid(const Spectrum& spectrum, int padded);

/// Coefficients of padded samples restricted back to |k|_inf <= K of `grid`.
Spectrum project_from_grid(std::span<const cplx> samples, int padded, const Grid2D& grid);

/// Retained-band coefficients of |u|^2 u (exact, via a padded product).
Spectrum cubic_term(const Spectrum& spectrum);

}  // namespace nlslab
