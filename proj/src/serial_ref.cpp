#include "dss/serial_ref.hpp"

#include <cmath>
#include <stdexcept>

namespace dss::ref {

std::vector<double> windowed_energies(const DualPolSymbolBlock& x, int w) {
  const std::size_t ls = x.size();
  if (w < 2 || w % 2 != 0 || ls < static_cast<std::size_t>(w) + 2)
    throw std::invalid_argument("ref windowed_energies: bad window");
  std::vector<double> g(ls - w);
  for (std::size_t i = 0; i < g.size(); ++i) {
    double s = 0.0;
    for (int k = 0; k <= w; ++k) s += x.symbol_energy(i + k);
    g[i] = s;
  }
  return g;
}

double edi(const DualPolSymbolBlock& x, int w) {
  const auto g = windowed_energies(x, w);
  double mean = 0.0;
  for (double v : g) mean += v;
  mean /= static_cast<double>(g.size());
  double var = 0.0;
  for (double v : g) var += (v - mean) * (v - mean);
  var /= static_cast<double>(g.size());
  return var / mean;
}

namespace {
std::vector<cplx> dft(const std::vector<cplx>& in, int sign) {
  const std::size_t n = in.size();
  const double pi = std::acos(-1.0);
  std::vector<cplx> out(n);
  for (std::size_t m = 0; m < n; ++m) {
    cplx acc = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      acc += in[k] * std::polar(1.0, sign * 2.0 * pi * double(m) * double(k) / double(n));
    out[m] = acc;
  }
  return out;
}
}  // namespace

DualPolSymbolBlock apply_dispersion(const DualPolSymbolBlock& x, double d_ps_nm_km,
                                    double lambda_nm, double baud_gbaud,
                                    double z_km) {
  const std::size_t n = x.size();
  const double pi = std::acos(-1.0);
  const double coef =
      d_ps_nm_km * lambda_nm * lambda_nm * pi * z_km * 1e-6 / kSpeedOfLight;
  DualPolSymbolBlock out = x;
  for (auto* pol : {&out.pol1, &out.pol2}) {
    auto spec = dft(*pol, -1);
    for (std::size_t m = 0; m < n; ++m) {
      double f = (m < (n + 1) / 2)
                     ? double(m) * baud_gbaud / double(n)
                     : (double(m) - double(n)) * baud_gbaud / double(n);
      spec[m] *= std::polar(1.0, coef * f * f);
    }
    auto time = dft(spec, +1);
    for (std::size_t k = 0; k < n; ++k) (*pol)[k] = time[k] / double(n);
  }
  return out;
}

}  // namespace dss::ref
