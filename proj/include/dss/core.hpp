#pragma once

// Shared signal types, unit conventions and power normalization.
//
// Unit conventions used throughout:
//   lengths            km
//   dispersion D       ps/(nm*km)
//   attenuation        dB/km
//   GVD beta2          ps^2/km
//   rates              GBaud / GHz
//   power              dBm at interface boundaries, mW internally
//   wavelength         nm
//
// Sample magnitudes squared are in mW.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace dss {

using cplx = std::complex<double>;

// c = 299792.458 km/s. The same numeric value is c in nm/ps, which is the
// combination that appears in the dispersion formulas below.
inline constexpr double kSpeedOfLight = 299792.458;

// Planck constant in mJ*s (powers are carried in mW).
inline constexpr double kPlanck_mJs = 6.62607015e-31;

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

// 2 x L_s complex symbol matrix: L_s time slots, two polarizations.
// One slot holds a 4D symbol; its energy is |pol1|^2 + |pol2|^2.
struct DualPolSymbolBlock {
  std::vector<cplx> pol1;
  std::vector<cplx> pol2;

  DualPolSymbolBlock() = default;
  DualPolSymbolBlock(std::vector<cplx> p1, std::vector<cplx> p2)
      : pol1(std::move(p1)), pol2(std::move(p2)) {
    if (pol1.size() != pol2.size())
      throw std::invalid_argument("DualPolSymbolBlock: polarization length mismatch");
    if (pol1.empty())
      throw std::invalid_argument("DualPolSymbolBlock: empty block");
  }

  std::size_t size() const { return pol1.size(); }

  double symbol_energy(std::size_t k) const {
    return std::norm(pol1[k]) + std::norm(pol2[k]);
  }

  double total_energy() const {
    double e = 0.0;
    for (std::size_t k = 0; k < pol1.size(); ++k) e += symbol_energy(k);
    return e;
  }
};

// Multi-sample-per-symbol dual-pol baseband signal.
struct SampledWaveform {
  std::vector<cplx> pol1;
  std::vector<cplx> pol2;
  double sample_rate_ghz = 0.0;
  double center_freq_offset_ghz = 0.0;
  int samples_per_symbol = 1;

  std::size_t size() const { return pol1.size(); }

  // mean per-sample power summed over both polarizations, mW
  double mean_power_mw() const {
    if (pol1.empty()) return 0.0;
    double p = 0.0;
    for (std::size_t k = 0; k < pol1.size(); ++k)
      p += std::norm(pol1[k]) + std::norm(pol2[k]);
    return p / static_cast<double>(pol1.size());
  }
};

// Scales the waveform so that the mean per-sample power over both
// polarizations equals target_mw. Pure positive real scaling.
SampledWaveform normalize_power(const SampledWaveform& w, double target_mw);

// beta2 = -D * lambda^2 / (2 pi c), result in ps^2/km.
double beta2_from_dispersion(double d_ps_nm_km, double lambda_nm);

// Two-sided channel memory 2M = 2*round(pi*|beta2|*B*R_s*L) in symbols.
int channel_memory(double d_ps_nm_km, double lambda_nm, double b_ghz,
                   double rs_gbaud, double length_km);

// Effective length (1 - exp(-alpha L)) / alpha, alpha from dB/km.
double effective_length_km(double alpha_db_per_km, double length_km);

}  // namespace dss
