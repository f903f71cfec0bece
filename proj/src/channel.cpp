#include "dss/channel.hpp"

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "dss/fft.hpp"

namespace dss {

namespace {

double raised_cosine(double f, double baud, double rolloff) {
  const double af = std::abs(f);
  const double pi = std::acos(-1.0);
  if (rolloff <= 0.0) {
    const double edge = baud / 2.0;
    if (af < edge - 1e-9 * baud) return 1.0;
    if (af > edge + 1e-9 * baud) return 0.0;
    return 0.5;  // band edge bins split between the two aliases
  }
  const double f1 = (1.0 - rolloff) * baud / 2.0;
  const double f2 = (1.0 + rolloff) * baud / 2.0;
  if (af <= f1) return 1.0;
  if (af >= f2) return 0.0;
  return 0.5 * (1.0 + std::cos(pi / (rolloff * baud) * (af - f1)));
}

}  // namespace

SampledWaveform rrc_shape(const DualPolSymbolBlock& block, double rolloff,
                          int sps, double baud_gbaud) {
  if (sps < 2) throw std::invalid_argument("rrc_shape: sps must be >= 2");
  if (rolloff < 0.0 || rolloff >= 1.0)
    throw std::invalid_argument("rrc_shape: rolloff must be in [0,1)");
  const std::size_t ls = block.size();
  const std::size_t n = ls * static_cast<std::size_t>(sps);
  const double fs = baud_gbaud * sps;

  SampledWaveform out;
  out.sample_rate_ghz = fs;
  out.samples_per_symbol = sps;
  out.pol1.assign(n, 0.0);
  out.pol2.assign(n, 0.0);
  for (std::size_t k = 0; k < ls; ++k) {
    out.pol1[k * sps] = block.pol1[k];
    out.pol2[k * sps] = block.pol2[k];
  }
  std::vector<double> h(n);
  for (std::size_t m = 0; m < n; ++m)
    h[m] = std::sqrt(raised_cosine(fft_bin_freq(m, n, fs), baud_gbaud, rolloff));
  for (auto* pol : {&out.pol1, &out.pol2}) {
    fft_forward(*pol);
    for (std::size_t m = 0; m < n; ++m) (*pol)[m] *= h[m];
    fft_inverse(*pol);
  }
  return out;
}

SampledWaveform frequency_mux(const std::vector<SampledWaveform>& waveforms,
                              const std::vector<double>& offsets_ghz) {
  if (waveforms.empty() || waveforms.size() != offsets_ghz.size())
    throw std::invalid_argument("frequency_mux: size mismatch");
  const std::size_t n = waveforms[0].size();
  const double fs = waveforms[0].sample_rate_ghz;
  const double df = fs / static_cast<double>(n);

  std::vector<cplx> acc1(n, 0.0), acc2(n, 0.0);
  for (std::size_t c = 0; c < waveforms.size(); ++c) {
    const auto& w = waveforms[c];
    if (w.size() != n || w.sample_rate_ghz != fs)
      throw std::invalid_argument("frequency_mux: waveform grids differ");
    const double baud = fs / w.samples_per_symbol;
    if (std::abs(offsets_ghz[c]) + baud / 2.0 > fs / 2.0 + 1e-9)
      throw std::invalid_argument("frequency_mux: shifted band exceeds Nyquist");
    const long shift = std::lround(offsets_ghz[c] / df);
    std::vector<cplx> s1 = w.pol1, s2 = w.pol2;
    fft_forward(s1);
    fft_forward(s2);
    for (std::size_t m = 0; m < n; ++m) {
      const std::size_t mm = (m + static_cast<std::size_t>(
                                      (shift % (long)n + (long)n)) ) % n;
      acc1[mm] += s1[m];
      acc2[mm] += s2[m];
    }
  }
  fft_inverse(acc1);
  fft_inverse(acc2);

  SampledWaveform out;
  out.pol1 = std::move(acc1);
  out.pol2 = std::move(acc2);
  out.sample_rate_ghz = fs;
  out.samples_per_symbol = waveforms[0].samples_per_symbol;
  out.center_freq_offset_ghz = 0.0;
  return out;
}

namespace {

struct LinearOp {
  std::vector<cplx> phase;  // per-bin factor incl. attenuation
};

// builds the frequency response of a z-km linear segment
LinearOp make_linear_op(const FiberParams& p, double z_km, std::size_t n, double fs) {
  const double pi = std::acos(-1.0);
  const double alpha = p.alpha_db_per_km * std::log(10.0) / 10.0;  // 1/km
  const double amp = std::exp(-alpha * z_km / 2.0);
  const double coef = p.d_ps_nm_km * p.lambda_nm * p.lambda_nm * pi * z_km *
                      1e-6 / kSpeedOfLight;
  LinearOp op;
  op.phase.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double f = fft_bin_freq(m, n, fs);
    op.phase[m] = std::polar(amp, coef * f * f);
  }
  return op;
}

void apply_pmd_step(std::vector<cplx>& s1, std::vector<cplx>& s2, double tau_ps,
                    double fs_ghz, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double pi = std::acos(-1.0);
  const double theta = 2.0 * pi * uni(rng);
  const double phi = 2.0 * pi * uni(rng);
  const cplx r01 = std::polar(std::sin(theta), phi);
  const cplx r10 = -std::conj(r01);
  const double ct = std::cos(theta);
  const std::size_t n = s1.size();
  for (std::size_t m = 0; m < n; ++m) {
    const double f = fft_bin_freq(m, n, fs_ghz);
    // tau in ps, f in GHz: pi*f*tau is in milliradians * 1e3 -> 1e-3 residue
    const cplx dp = std::polar(1.0, pi * f * tau_ps * 1e-3);
    const cplx a = ct * s1[m] + r01 * s2[m];
    const cplx b = r10 * s1[m] + ct * s2[m];
    s1[m] = a * dp;
    s2[m] = b * std::conj(dp);
  }
}

}  // namespace

SampledWaveform ssfm_propagate(const SampledWaveform& w, const FiberParams& fiber,
                               double step_km, std::uint64_t seed) {
  if (step_km <= 0.0) throw std::invalid_argument("ssfm_propagate: step must be > 0");
  if (fiber.length_km <= 0.0)
    throw std::invalid_argument("ssfm_propagate: fiber length must be > 0");
  const std::size_t n = w.size();
  const double fs = w.sample_rate_ghz;

  std::vector<double> deltas;
  double rest = fiber.length_km;
  while (rest > 1e-12) {
    const double d = std::min(step_km, rest);
    deltas.push_back(d);
    rest -= d;
  }
  const std::size_t n_steps = deltas.size();

  const double alpha = fiber.alpha_db_per_km * std::log(10.0) / 10.0;
  const double gamma_mw = fiber.gamma_w_km * (8.0 / 9.0) * 1e-3;  // per mW, Manakov
  std::mt19937_64 pmd_rng(seed);

  // cached linear operators keyed by segment length
  std::map<double, LinearOp> ops;
  auto linear = [&](double z) -> const LinearOp& {
    auto it = ops.find(z);
    if (it == ops.end())
      it = ops.emplace(z, make_linear_op(fiber, z, n, fs)).first;
    return it->second;
  };

  SampledWaveform out = w;
  auto& s1 = out.pol1;
  auto& s2 = out.pol2;

  // frequency domain; adjacent half-steps are merged so each split step costs
  // one inverse and one forward transform per polarization
  fft_forward(s1);
  fft_forward(s2);
  {
    const auto& op = linear(deltas[0] / 2.0);
    for (std::size_t m = 0; m < n; ++m) {
      s1[m] *= op.phase[m];
      s2[m] *= op.phase[m];
    }
    if (fiber.pmd_ps_sqrt_km > 0.0)
      apply_pmd_step(s1, s2, fiber.pmd_ps_sqrt_km * std::sqrt(deltas[0]), fs,
                     pmd_rng);
  }
  for (std::size_t s = 0; s < n_steps; ++s) {
    fft_inverse(s1);
    fft_inverse(s2);
    const double d = deltas[s];
    const double d_eff = alpha > 0.0 ? (1.0 - std::exp(-alpha * d)) / alpha : d;
    // field is at the step midpoint; scale the effective length back to the
    // step-entry power so the phase integral is exact for constant envelopes
    const double wstep = gamma_mw * d_eff * std::exp(alpha * d / 2.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t m = 0; m < static_cast<std::ptrdiff_t>(n); ++m) {
      const double p = std::norm(s1[m]) + std::norm(s2[m]);
      const cplx rot = std::polar(1.0, wstep * p);
      s1[m] *= rot;
      s2[m] *= rot;
    }
    fft_forward(s1);
    fft_forward(s2);
    const double tail =
        (s + 1 < n_steps) ? (d / 2.0 + deltas[s + 1] / 2.0) : d / 2.0;
    const auto& op = linear(tail);
    for (std::size_t m = 0; m < n; ++m) {
      s1[m] *= op.phase[m];
      s2[m] *= op.phase[m];
    }
    if (s + 1 < n_steps && fiber.pmd_ps_sqrt_km > 0.0)
      apply_pmd_step(s1, s2, fiber.pmd_ps_sqrt_km * std::sqrt(deltas[s + 1]),
                     fs, pmd_rng);
  }
  fft_inverse(s1);
  fft_inverse(s2);
  return out;
}

SampledWaveform edfa(const SampledWaveform& w, double gain_db, double nf_db,
                     bool ase_on, double lambda_nm, std::uint64_t seed) {
  if (gain_db < 0.0) throw std::invalid_argument("edfa: gain must be >= 0 dB");
  const double g_field = std::pow(10.0, gain_db / 20.0);
  SampledWaveform out = w;
  for (auto* pol : {&out.pol1, &out.pol2})
    for (auto& v : *pol) v *= g_field;
  if (!ase_on) return out;

  const double g = std::pow(10.0, gain_db / 10.0);
  const double n_sp = std::pow(10.0, nf_db / 10.0) / 2.0;
  const double nu_hz = 2.99792458e8 / (lambda_nm * 1e-9);
  const double b_hz = w.sample_rate_ghz * 1e9;
  const double p_ase_mw = (g - 1.0) * n_sp * kPlanck_mJs * nu_hz * b_hz;  // per pol
  const double sigma = std::sqrt(p_ase_mw / 2.0);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (auto* pol : {&out.pol1, &out.pol2})
    for (auto& v : *pol) v += cplx(sigma * gauss(rng), sigma * gauss(rng));
  return out;
}

}  // namespace dss
