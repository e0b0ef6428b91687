#include "nlslab/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace nlslab {

namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (size, direction) and never freed.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int n, int direction) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, direction);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    auto* buf = fftw_alloc_complex(static_cast<std::size_t>(n) * n);
    fftw_plan plan = fftw_plan_dft_2d(n, n, buf, buf, direction, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    if (plan == nullptr) throw std::runtime_error("fftw: plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

void fft_inplace(std::vector<cplx>& data, int n, int direction) {
  fftw_plan plan = PlanCache::instance().get(n, direction);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
}

int wrap(int k, int n) { return k >= 0 ? k : k + n; }

}  // namespace

Grid2D Grid2D::make(int modes, double length, std::optional<int> cutoff) {
  Grid2D g;
  g.modes = modes;
  g.length = length;
  g.cutoff = cutoff.value_or(modes / 3);
  g.validate();
  return g;
}

void Grid2D::validate() const {
  if (modes < 8 || modes % 2 != 0)
    throw std::invalid_argument("Grid2D: modes must be even and >= 8, got " + std::to_string(modes));
  if (!(length > 0.0) || !std::isfinite(length))
    throw std::invalid_argument("Grid2D: box length must be positive");
  if (cutoff < 0 || cutoff > modes / 2 - 1)
    throw std::invalid_argument("Grid2D: cutoff must lie in [0, M/2-1], got " + std::to_string(cutoff));
}

Field::Field(const Grid2D& grid) : grid_(grid), values_(grid.size()) {}

Field::Field(const Grid2D& grid, std::vector<cplx> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw std::invalid_argument("Field: value count does not match grid");
}

Spectrum::Spectrum(const Grid2D& grid) : grid_(grid), coeffs_(grid.size()) {}

Spectrum::Spectrum(const Grid2D& grid, std::vector<cplx> coeffs) : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size()) throw std::invalid_argument("Spectrum: coefficient count does not match grid");
}

void Spectrum::dealias() {
  const Grid2D g = grid_;
  for_each_mode([&](int k1, int k2, cplx& c) {
    if (!g.retained(k1, k2)) c = 0.0;
  });
}

bool Spectrum::is_dealiased() const {
  bool ok = true;
  for_each_mode([&](int k1, int k2, const cplx& c) {
    if (!grid_.retained(k1, k2) && c != 0.0) ok = false;
  });
  return ok;
}

int Spectrum::support_radius() const {
  int r = 0;
  for_each_mode([&](int k1, int k2, const cplx& c) {
    if (c != 0.0) r = std::max({r, std::abs(k1), std::abs(k2)});
  });
  return r;
}

Spectrum& Spectrum::operator+=(const Spectrum& other) {
  if (!(grid_ == other.grid_)) throw std::invalid_argument("Spectrum: grid mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

Spectrum& Spectrum::operator*=(cplx factor) {
  for (auto& c : coeffs_) c *= factor;
  return *this;
}

Spectrum forward_transform(const Field& field) {
  const Grid2D& g = field.grid();
  std::vector<cplx> data(field.values().begin(), field.values().end());
  fft_inplace(data, g.modes, FFTW_FORWARD);
  const double norm = 1.0 / static_cast<double>(g.size());
  for (auto& c : data) c *= norm;
  return Spectrum(g, std::move(data));
}

Field inverse_transform(const Spectrum& spectrum) {
  const Grid2D& g = spectrum.grid();
  std::vector<cplx> data(spectrum.coeffs().begin(), spectrum.coeffs().end());
  fft_inplace(data, g.modes, FFTW_BACKWARD);
  return Field(g, std::move(data));
}

double mass(const Spectrum& spectrum) {
  double sum = 0.0;
  for (const auto& c : spectrum.coeffs()) sum += std::norm(c);
  return spectrum.grid().length * std::sqrt(sum);
}

double mass(const Field& u) { return mass(forward_transform(u)); }

double mass_quadrature(const Field& u) {
  double sum = 0.0;
  for (const auto& v : u.values()) sum += std::norm(v);
  return u.grid().spacing() * std::sqrt(sum);
}

int fft_friendly_size(int min_size) {
  for (int n = std::max(min_size, 2);; ++n) {
    if (n % 2 != 0) continue;
    int r = n;
    for (int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return n;
  }
}

int product_grid_size(int radius, int degree) {
  return fft_friendly_size(std::max(degree * radius + 1, 4));
}

std::vector<cplx> sample_on_grid(const Spectrum& spectrum, int padded) {
  const int r = spectrum.support_radius();
  if (2 * r >= padded) throw std::invalid_argument("sample_on_grid: padded grid too small for support");
  std::vector<cplx> data(static_cast<std::size_t>(padded) * padded);
  spectrum.for_each_mode([&](int k1, int k2, const cplx& c) {
    if (c != 0.0) data[static_cast<std::size_t>(wrap(k1, padded)) * padded + wrap(k2, padded)] = c;
  });
  fft_inplace(data, padded, FFTW_BACKWARD);
  return data;
}

Spectrum project_from_grid(std::span<const cplx> samples, int padded, const Grid2D& grid) {
  if (samples.size() != static_cast<std::size_t>(padded) * padded)
    throw std::invalid_argument("project_from_grid: sample count mismatch");
  if (2 * grid.cutoff >= padded) throw std::invalid_argument("project_from_grid: padded grid too small");
  std::vector<cplx> data(samples.begin(), samples.end());
  fft_inplace(data, padded, FFTW_FORWARD);
  const double norm = 1.0 / (static_cast<double>(padded) * padded);
  Spectrum out(grid);
  const int K = grid.cutoff;
  for (int k1 = -K; k1 <= K; ++k1)
    for (int k2 = -K; k2 <= K; ++k2)
      out.at(k1, k2) = data[static_cast<std::size_t>(wrap(k1, padded)) * padded + wrap(k2, padded)] * norm;
  return out;
}

double quartic_integral(const Spectrum& spectrum) {
  const int padded = product_grid_size(spectrum.support_radius(), 4);
  const auto samples = sample_on_grid(spectrum, padded);
  double sum = 0.0;
  for (const auto& v : samples) {
    const double a = std::norm(v);
    sum += a * a;
  }
  const double h = spectrum.grid().length / padded;
  return h * h * sum;
}

double energy(const Spectrum& spectrum, int sign) {
  const Grid2D& g = spectrum.grid();
  const double scale2 = g.freq_scale() * g.freq_scale();
  double kinetic = 0.0;
  spectrum.for_each_mode([&](int k1, int k2, const cplx& c) {
    kinetic += (k1 * k1 + k2 * k2) * scale2 * std::norm(c);
  });
  kinetic *= 0.5 * g.length * g.length;
  return kinetic + 0.25 * sign * quartic_integral(spectrum);
}

double energy(const Field& u, int sign) { return energy(forward_transform(u), sign); }

double sobolev_norm(const Spectrum& spectrum, double s, bool homogeneous) {
  const Grid2D& g = spectrum.grid();
  const double scale2 = g.freq_scale() * g.freq_scale();
  double sum = 0.0;
  spectrum.for_each_mode([&](int k1, int k2, const cplx& c) {
    const double xi2 = (k1 * k1 + k2 * k2) * scale2;
    if (homogeneous) {
      if (k1 == 0 && k2 == 0) return;
      sum += std::pow(xi2, s) * std::norm(c);
    } else {
      sum += std::pow(1.0 + xi2, s) * std::norm(c);
    }
  });
  return g.length * std::sqrt(sum);
}

Spectrum cubic_term(const Spectrum& spectrum) {
  const Grid2D& g = spectrum.grid();
  const int r = spectrum.support_radius();
  // Frequencies up to 3r fold onto k - P; keep them outside the retained band.
  const int padded = fft_friendly_size(std::max({3 * r + g.cutoff + 1, 2 * r + 1, 2 * g.cutoff + 1, 4}));
  auto samples = sample_on_grid(spectrum, padded);
  for (auto& v : samples) v *= std::norm(v);
  return project_from_grid(samples, padded, g);
}

}  // namespace nlslab
