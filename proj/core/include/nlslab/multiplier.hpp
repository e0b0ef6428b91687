#pragma once

#include <optional>

#include "nlslab/grid.hpp"

namespace nlslab {

/// Parameters of the smoothing operator I_N and the resonance split.
struct IMethodParams {
  double N = 8.0;         // multiplier threshold; +inf means m == 1
  double s = 0.6;         // target regularity, 0 < s < 1
  double theta0 = 0.125;  // resonance cosine threshold
  int sign = +1;          // +1 defocusing, -1 focusing

  /// theta0 defaults to 1/N, or 1 when N is infinite.
  static IMethodParams make(double N, double s, std::optional<double> theta0 = std::nullopt, int sign = +1);

  /// N >= 1, 0 < s < 1, 0 < theta0 <= 1, sign in {-1, +1}.
  void validate() const;
  /// The narrower range 0 < theta0 < 1/100 used by the asymptotic theory.
  bool in_small_angle_range() const { return theta0 > 0.0 && theta0 < 0.01; }
  /// Same s and sign, threshold N, theta0 = 1/N.
  IMethodParams with_N(double n) const;
};

/// m(r): 1 for r <= N, (r/N)^{s-1} for r >= 2N, and on [N, 2N]
///   log m = (s-1) log 2 * H(log(r/N) / log 2),  H(t) = 2t^2 - t^3,
/// a C^1 monotone interpolant in log-log coordinates.
double m_eval(double r, double N, double s);
inline double m_eval(double r, const IMethodParams& p) { return m_eval(r, p.N, p.s); }

Spectrum apply_I(const Spectrum& spectrum, const IMethodParams& params);
Field apply_I(const Field& u, const IMethodParams& params);

/// E(Iu) with the configured nonlinearity sign.
double energy_Iu(const Spectrum& spectrum, const IMethodParams& params);
double energy_Iu(const Field& u, const IMethodParams& params);

/// u^(lambda)(x) = u(x / lambda) / lambda on a box of length lambda L with the
/// same mode count. Rejects lambda < 1.
Field rescale(const Field& u, double lambda);
Spectrum rescale(const Spectrum& spectrum, double lambda);

/// lambda = C N^{(1-s)/s}.
double lambda_of_N(double N, double s, double C);

struct RescaledEnergyReport {
  double lambda = 1.0;
  double energy_before = 0.0;  // E(I u0)
  double energy_after = 0.0;   // E(I u0^(lambda))
  bool passes_third = false;   // energy_after <= 1/3
};

RescaledEnergyReport verify_rescaled_energy(const Field& u0, const IMethodParams& params, double C);
/// Same report for an explicit lambda.
RescaledEnergyReport rescaled_energy_at(const Field& u0, const IMethodParams& params, double lambda);

}  // namespace nlslab
