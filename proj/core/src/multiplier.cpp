#include "nlslab/multiplier.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nlslab {

IMethodParams IMethodParams::make(double N, double s, std::optional<double> theta0, int sign) {
  IMethodParams p;
  p.N = N;
  p.s = s;
  p.theta0 = theta0.value_or(std::isinf(N) ? 1.0 : 1.0 / N);
  p.sign = sign;
  p.validate();
  return p;
}

void IMethodParams::validate() const {
  if (!(N >= 1.0)) throw std::invalid_argument("IMethodParams: N must be >= 1");
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("IMethodParams: s must lie in (0, 1)");
  if (!(theta0 > 0.0 && theta0 <= 1.0)) throw std::invalid_argument("IMethodParams: theta0 must lie in (0, 1]");
  if (sign != 1 && sign != -1) throw std::invalid_argument("IMethodParams: sign must be +1 or -1");
}

IMethodParams IMethodParams::with_N(double n) const { return make(n, s, 1.0 / n, sign); }

double m_eval(double r, double N, double s) {
  if (r <= N) return 1.0;
  if (r >= 2.0 * N) return std::pow(r / N, s - 1.0);
  const double t = std::log(r / N) / std::numbers::ln2;
  const double h = t * t * (2.0 - t);
  return std::exp((s - 1.0) * std::numbers::ln2 * h);
}

Spectrum apply_I(const Spectrum& spectrum, const IMethodParams& params) {
  Spectrum out = spectrum;
  const double scale = spectrum.grid().freq_scale();
  out.for_each_mode([&](int k1, int k2, cplx& c) {
    if (c != 0.0) c *= m_eval(scale * std::hypot(double(k1), double(k2)), params);
  });
  return out;
}

Field apply_I(const Field& u, const IMethodParams& params) {
  return inverse_transform(apply_I(forward_transform(u), params));
}

double energy_Iu(const Spectrum& spectrum, const IMethodParams& params) {
  return energy(apply_I(spectrum, params), params.sign);
}

double energy_Iu(const Field& u, const IMethodParams& params) { return energy_Iu(forward_transform(u), params); }

Field rescale(const Field& u, double lambda) {
  if (!(lambda >= 1.0)) throw std::invalid_argument("rescale: lambda must be >= 1");
  Grid2D g = u.grid();
  g.length *= lambda;
  std::vector<cplx> values(u.values().begin(), u.values().end());
  for (auto& v : values) v /= lambda;
  return Field(g, std::move(values));
}

Spectrum rescale(const Spectrum& spectrum, double lambda) {
  if (!(lambda >= 1.0)) throw std::invalid_argument("rescale: lambda must be >= 1");
  Grid2D g = spectrum.grid();
  g.length *= lambda;
  std::vector<cplx> coeffs(spectrum.coeffs().begin(), spectrum.coeffs().end());
  for (auto& c : coeffs) c /= lambda;
  return Spectrum(g, std::move(coeffs));
}

double lambda_of_N(double N, double s, double C) {
  if (!(N >= 1.0) || !(s > 0.0 && s < 1.0) || !(C > 0.0))
    throw std::invalid_argument("lambda_of_N: need N >= 1, 0 < s < 1, C > 0");
  return C * std::pow(N, (1.0 - s) / s);
}

RescaledEnergyReport rescaled_energy_at(const Field& u0, const IMethodParams& params, double lambda) {
  RescaledEnergyReport r;
  r.lambda = lambda;
  r.energy_before = energy_Iu(u0, params);
  r.energy_after = energy_Iu(rescale(u0, lambda), params);
  r.passes_third = r.energy_after <= 1.0 / 3.0;
  return r;
}

RescaledEnergyReport verify_rescaled_energy(const Field& u0, const IMethodParams& params, double C) {
  return rescaled_energy_at(u0, params, lambda_of_N(params.N, params.s, C));
}

}  // namespace nlslab
