#include "dss/core.hpp"

#include <cmath>

namespace dss {

SampledWaveform normalize_power(const SampledWaveform& w, double target_mw) {
  if (w.pol1.empty())
    throw std::invalid_argument("normalize_power: empty waveform");
  if (target_mw <= 0.0)
    throw std::invalid_argument("normalize_power: target power must be > 0");
  const double p = w.mean_power_mw();
  if (p <= 0.0) throw std::invalid_argument("normalize_power: zero-power signal");
  const double s = std::sqrt(target_mw / p);
  SampledWaveform out = w;
  for (auto& v : out.pol1) v *= s;
  for (auto& v : out.pol2) v *= s;
  return out;
}

double beta2_from_dispersion(double d_ps_nm_km, double lambda_nm) {
  if (lambda_nm <= 0.0)
    throw std::invalid_argument("beta2_from_dispersion: lambda must be > 0");
  const double pi = std::acos(-1.0);
  return -d_ps_nm_km * lambda_nm * lambda_nm / (2.0 * pi * kSpeedOfLight);
}

int channel_memory(double d_ps_nm_km, double lambda_nm, double b_ghz,
                   double rs_gbaud, double length_km) {
  const double pi = std::acos(-1.0);
  const double beta2 = std::abs(beta2_from_dispersion(d_ps_nm_km, lambda_nm));
  // ps^2/km * GHz * GBaud * km = 1e-6 (dimensionless)
  const double m = pi * beta2 * b_ghz * rs_gbaud * length_km * 1e-6;
  return 2 * static_cast<int>(std::llround(m));
}

double effective_length_km(double alpha_db_per_km, double length_km) {
  if (alpha_db_per_km <= 0.0) return length_km;
  const double alpha = alpha_db_per_km * std::log(10.0) / 10.0;  // 1/km
  return (1.0 - std::exp(-alpha * length_km)) / alpha;
}

}  // namespace dss
