#include "dss/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "dss/fft.hpp"

namespace dss {

EdiWindow::EdiWindow(int w_) : w(w_) {
  if (w < 2 || w % 2 != 0)
    throw std::invalid_argument("EdiWindow: w must be even and >= 2");
}

DispersionSchedule::DispersionSchedule(double d, double lambda, double l_d,
                                       double baud, std::vector<int> indices)
    : d_ps_nm_km(d), lambda_nm(lambda), l_d_km(l_d), baud_gbaud(baud),
      span_indices(std::move(indices)) {
  if (span_indices.empty())
    throw std::invalid_argument("DispersionSchedule: empty index set");
  for (std::size_t i = 0; i < span_indices.size(); ++i) {
    if (span_indices[i] < 0)
      throw std::invalid_argument("DispersionSchedule: negative span index");
    if (i > 0 && span_indices[i] <= span_indices[i - 1])
      throw std::invalid_argument("DispersionSchedule: indices must be ascending");
  }
}

std::vector<double> windowed_energies(const DualPolSymbolBlock& x,
                                      const EdiWindow& w) {
  const std::size_t ls = x.size();
  if (ls < static_cast<std::size_t>(w.w) + 2)
    throw std::invalid_argument("windowed_energies: block shorter than w + 2");
  // prefix sums of 4D energies
  std::vector<double> prefix(ls + 1, 0.0);
  for (std::size_t k = 0; k < ls; ++k)
    prefix[k + 1] = prefix[k] + x.symbol_energy(k);
  const std::size_t count = ls - w.w;
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i)
    g[i] = prefix[i + w.w + 1] - prefix[i];
  return g;
}

double edi(const DualPolSymbolBlock& x, const EdiWindow& w) {
  const auto g = windowed_energies(x, w);
  double mean = 0.0;
  for (double v : g) mean += v;
  mean /= static_cast<double>(g.size());
  if (mean <= 0.0) throw std::invalid_argument("edi: zero-mean windowed energies");
  double var = 0.0;
  for (double v : g) var += (v - mean) * (v - mean);
  var /= static_cast<double>(g.size());  // population variance
  return var / mean;
}

DualPolSymbolBlock apply_dispersion(const DualPolSymbolBlock& x, double d_ps_nm_km,
                                    double lambda_nm, double baud_gbaud,
                                    double z_km) {
  const std::size_t n = x.size();
  const double pi = std::acos(-1.0);
  // D * lambda^2 * pi * df^2 * z / c with D in ps/(nm km), lambda in nm,
  // df in GHz, z in km: the unit residue is 1e-6.
  const double coef =
      d_ps_nm_km * lambda_nm * lambda_nm * pi * z_km * 1e-6 / kSpeedOfLight;
  std::vector<cplx> phase(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double f = fft_bin_freq(m, n, baud_gbaud);
    phase[m] = std::polar(1.0, coef * f * f);
  }
  DualPolSymbolBlock out = x;
  for (auto* pol : {&out.pol1, &out.pol2}) {
    fft_forward(*pol);
    for (std::size_t m = 0; m < n; ++m) (*pol)[m] *= phase[m];
    fft_inverse(*pol);
  }
  return out;
}

double d_edi(const DualPolSymbolBlock& x, const EdiWindow& w,
             const DispersionSchedule& schedule) {
  double sum = 0.0;
  for (int n : schedule.span_indices) {
    if (n == 0) {
      sum += edi(x, w);
    } else {
      const auto dispersed =
          apply_dispersion(x, schedule.d_ps_nm_km, schedule.lambda_nm,
                           schedule.baud_gbaud, n * schedule.l_d_km);
      sum += edi(dispersed, w);
    }
  }
  return sum / static_cast<double>(schedule.span_indices.size());
}

double d_edi_single_span(const DualPolSymbolBlock& x, const EdiWindow& w,
                         double d_ps_nm_km, double lambda_nm, double baud_gbaud,
                         double alpha_db_per_km, double length_km) {
  if (alpha_db_per_km <= 0.0)
    throw std::invalid_argument("d_edi_single_span: alpha must be > 0");
  const double l_eff = effective_length_km(alpha_db_per_km, length_km);
  const auto dispersed =
      apply_dispersion(x, d_ps_nm_km, lambda_nm, baud_gbaud, l_eff);
  return 0.5 * (edi(x, w) + edi(dispersed, w));
}

}  // namespace dss
