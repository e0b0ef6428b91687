#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlslab/multilinear.hpp"

namespace nlslab {

/// 1/2 |xi1|^2 m(|xi1|)^2 on xi1 + xi2 = 0.
double sigma2(const Vec2& xi1, const Vec2& xi2, const IMethodParams& params);
/// 1/4 m1 m2 m3 m4.
double sigma4(const FrequencyTuple<4>& t, const IMethodParams& params);
/// 1/4 (-f1 + f2 - f3 + f4), f_j = m_j^2 |xi_j|^2; [2 i X(sigma2)]_sym = i * this.
double x_sigma2_sym(const FrequencyTuple<4>& t, const IMethodParams& params);
/// -2 xi_12 . xi_14.
double alpha4(const FrequencyTuple<4>& t);
/// cos of the angle between xi_12 and xi_14; nullopt when either vanishes.
std::optional<double> cos_resonance_angle(const FrequencyTuple<4>& t);

/// |cos(xi_12, xi_14)| >= theta0 with both vectors nonzero, from the dot
/// product and squared lengths. Shared by every resonance test.
inline bool angle_nonresonant(double dot, double n12, double n14, double theta0) {
  return n12 > 0.0 && n14 > 0.0 && dot * dot >= theta0 * theta0 * n12 * n14;
}

/// max |xi_j| <= N, or the angle test above.
bool in_omega_nr(const FrequencyTuple<4>& t, const IMethodParams& params);
/// 1/4 when max |xi_j| <= N; x_sigma2_sym / alpha4 on the angle branch; 0 otherwise.
double sigma4_tilde(const FrequencyTuple<4>& t, const IMethodParams& params);

SymbolEvaluator<2> sigma2_symbol(const IMethodParams& params);
/// Separable, with factors m(|xi|) and prefactor 1/4.
SymbolEvaluator<4> sigma4_symbol(const IMethodParams& params);
SymbolEvaluator<4> x_sigma2_sym_symbol(const IMethodParams& params);
SymbolEvaluator<4> alpha4_symbol();
SymbolEvaluator<4> sigma4_tilde_symbol(const IMethodParams& params);
/// sigma4_tilde - sigma4, tagged requires_max_gt_N.
SymbolEvaluator<4> sigma4_correction_symbol(const IMethodParams& params);

// Fast lattice evaluations (pair-parametrized kernel). All take a dealiased
// spectrum and use the same classification as the pointwise functions.

/// Lambda_4(sigma4_tilde; u).
double lambda4_sigma4_tilde(const Spectrum& spectrum, const IMethodParams& params);
/// Lambda_4(sigma4_tilde - sigma4; u).
double lambda4_correction(const Spectrum& spectrum, const IMethodParams& params);

/// E_tilde = Lambda_2(sigma2) + sign * Lambda_4(sigma4_tilde), with the
/// quartic part split as separable sigma4 plus the high-frequency correction.
double modified_energy_tilde(const Spectrum& spectrum, const IMethodParams& params);
double modified_energy_tilde(const Field& u, const IMethodParams& params);

/// |E(Iu) - E_tilde(u)| = |Lambda_4(sigma4 - sigma4_tilde; u)|.
double fixed_time_gap(const Spectrum& spectrum, const IMethodParams& params);

/// d/dt E_tilde along the semi-discrete flow, split as
///   quartic = sign * Lambda_4(i (sigma4_tilde alpha4 - x_sigma2_sym)),
///   sextic  = Lambda_6(4 i X(sigma4_tilde)),  rate = quartic - sextic.
/// The quartic symbol is supported on resonant tuples only.
struct ModifiedEnergyRate {
  double quartic = 0.0;
  double sextic = 0.0;
  double rate = 0.0;
};
ModifiedEnergyRate modified_energy_rate(const Spectrum& spectrum, const IMethodParams& params);

enum class AuditStratum { all, a, b, c };
AuditStratum parse_stratum(const std::string& name);
std::string to_string(AuditStratum s);

struct AuditConfig {
  IMethodParams params{};
  std::uint64_t seed = 1;
  AuditStratum stratum = AuditStratum::all;
};

struct HistogramRow {
  double lo = 0.0;
  double hi = 0.0;
  std::uint64_t count = 0;
};

struct SymbolAuditReport {
  std::uint64_t samples = 0;
  /// max |x_sigma2_sym| / (min_j m_j^2 |xi_12| |xi_14|)
  double max_ratio = 0.0;
  FrequencyTuple<4> argmax_tuple{};
  /// max |sigma4_tilde| theta0 / min_j m_j^2
  double max_corollary_ratio = 0.0;
  FrequencyTuple<4> corollary_argmax_tuple{};
  std::array<double, 3> stratum_max_ratio{};
  std::array<std::uint64_t, 3> stratum_samples{};
  /// log10-spaced bins of the lemma ratio.
  std::vector<HistogramRow> histogram;
};

/// Seeded stratified sampling of Sigma_4 (continuous frequencies):
///   a: |xi_12|, |xi_14| comparable to |xi_1|
///   b: |xi_12| comparable to |xi_1|, |xi_14| much smaller
///   c: both much smaller than |xi_1|
/// Shards run in parallel with seeds derived from the master seed.
SymbolAuditReport audit_symbol_bounds(const AuditConfig& config, std::uint64_t count);

}  // namespace nlslab
