#include "dss/rx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
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
    return 0.5;
  }
  const double f1 = (1.0 - rolloff) * baud / 2.0;
  const double f2 = (1.0 + rolloff) * baud / 2.0;
  if (af <= f1) return 1.0;
  if (af >= f2) return 0.0;
  return 0.5 * (1.0 + std::cos(pi / (rolloff * baud) * (af - f1)));
}

}  // namespace

DualPolSymbolBlock extract_and_match(const SampledWaveform& w, double offset_ghz,
                                     double baud_gbaud, double rolloff) {
  const std::size_t n = w.size();
  const double fs = w.sample_rate_ghz;
  if (std::abs(offset_ghz) + baud_gbaud / 2.0 > fs / 2.0 + 1e-9)
    throw std::invalid_argument("extract_and_match: band outside simulation grid");
  const double sps_d = fs / baud_gbaud;
  const int sps = static_cast<int>(std::lround(sps_d));
  if (std::abs(sps_d - sps) > 1e-9 || sps < 1 || n % sps != 0)
    throw std::invalid_argument("extract_and_match: non-integer samples per symbol");

  const double df = fs / static_cast<double>(n);
  const long shift = std::lround(offset_ghz / df);

  std::vector<cplx> s1 = w.pol1, s2 = w.pol2;
  fft_forward(s1);
  fft_forward(s2);
  std::vector<cplx> r1(n), r2(n);
  for (std::size_t m = 0; m < n; ++m) {
    // rotate the spectrum down by the channel offset
    const std::size_t src = (m + static_cast<std::size_t>((shift % (long)n + (long)n))) % n;
    const double h = std::sqrt(raised_cosine(fft_bin_freq(m, n, fs), baud_gbaud, rolloff));
    r1[m] = s1[src] * h;
    r2[m] = s2[src] * h;
  }
  fft_inverse(r1);
  fft_inverse(r2);

  const std::size_t ls = n / sps;
  std::vector<cplx> p1(ls), p2(ls);
  const double gain = static_cast<double>(sps);  // undoes the zero-stuffing loss
  for (std::size_t k = 0; k < ls; ++k) {
    p1[k] = r1[k * sps] * gain;
    p2[k] = r2[k * sps] * gain;
  }
  return DualPolSymbolBlock(std::move(p1), std::move(p2));
}

SampledWaveform cdc(const SampledWaveform& w, double d_ps_nm_km, double lambda_nm,
                    double total_length_km) {
  const std::size_t n = w.size();
  const double pi = std::acos(-1.0);
  const double coef = d_ps_nm_km * lambda_nm * lambda_nm * pi *
                      (-total_length_km) * 1e-6 / kSpeedOfLight;
  SampledWaveform out = w;
  for (auto* pol : {&out.pol1, &out.pol2}) {
    fft_forward(*pol);
    for (std::size_t m = 0; m < n; ++m) {
      const double f = fft_bin_freq(m, n, w.sample_rate_ghz);
      (*pol)[m] *= std::polar(1.0, coef * f * f);
    }
    fft_inverse(*pol);
  }
  return out;
}

DualPolSymbolBlock genie_equalize(const DualPolSymbolBlock& rx,
                                  const DualPolSymbolBlock& tx_ref) {
  const std::size_t ls = rx.size();
  if (ls != tx_ref.size())
    throw std::invalid_argument("genie_equalize: block length mismatch");
  // H = (sum x y^H)(sum y y^H)^-1, 2x2 closed form
  cplx rxy00 = 0, rxy01 = 0, rxy10 = 0, rxy11 = 0;
  cplx ryy00 = 0, ryy01 = 0, ryy10 = 0, ryy11 = 0;
  for (std::size_t k = 0; k < ls; ++k) {
    const cplx x1 = tx_ref.pol1[k], x2 = tx_ref.pol2[k];
    const cplx y1 = rx.pol1[k], y2 = rx.pol2[k];
    rxy00 += x1 * std::conj(y1);
    rxy01 += x1 * std::conj(y2);
    rxy10 += x2 * std::conj(y1);
    rxy11 += x2 * std::conj(y2);
    ryy00 += y1 * std::conj(y1);
    ryy01 += y1 * std::conj(y2);
    ryy10 += y2 * std::conj(y1);
    ryy11 += y2 * std::conj(y2);
  }
  const cplx det = ryy00 * ryy11 - ryy01 * ryy10;
  const double scale = std::abs(ryy00) + std::abs(ryy11);
  if (scale <= 0.0 || std::abs(det) < 1e-15 * scale * scale)
    throw std::invalid_argument("genie_equalize: degenerate block");
  const cplx i00 = ryy11 / det, i01 = -ryy01 / det;
  const cplx i10 = -ryy10 / det, i11 = ryy00 / det;
  const cplx h00 = rxy00 * i00 + rxy01 * i10;
  const cplx h01 = rxy00 * i01 + rxy01 * i11;
  const cplx h10 = rxy10 * i00 + rxy11 * i10;
  const cplx h11 = rxy10 * i01 + rxy11 * i11;

  std::vector<cplx> p1(ls), p2(ls);
  for (std::size_t k = 0; k < ls; ++k) {
    p1[k] = h00 * rx.pol1[k] + h01 * rx.pol2[k];
    p2[k] = h10 * rx.pol1[k] + h11 * rx.pol2[k];
  }
  return DualPolSymbolBlock(std::move(p1), std::move(p2));
}

DualPolSymbolBlock cpr_data_aided(const DualPolSymbolBlock& rx,
                                  const DualPolSymbolBlock& tx_ref, int window) {
  if (window < 1) throw std::invalid_argument("cpr_data_aided: window must be >= 1");
  const std::size_t ls = rx.size();
  if (ls != tx_ref.size())
    throw std::invalid_argument("cpr_data_aided: block length mismatch");

  std::vector<cplx> corr(ls + 1, 0.0);  // prefix sums of y*conj(x)
  for (std::size_t k = 0; k < ls; ++k)
    corr[k + 1] = corr[k] + rx.pol1[k] * std::conj(tx_ref.pol1[k]) +
                  rx.pol2[k] * std::conj(tx_ref.pol2[k]);

  std::vector<cplx> p1(ls), p2(ls);
  const long half_lo = (window - 1) / 2, half_hi = window / 2;
  for (std::size_t k = 0; k < ls; ++k) {
    const long lo = std::max<long>(0, static_cast<long>(k) - half_lo);
    const long hi = std::min<long>(ls - 1, static_cast<long>(k) + half_hi);
    const cplx s = corr[hi + 1] - corr[lo];
    const double theta = (s == cplx(0.0)) ? 0.0 : std::arg(s);
    const cplx rot = std::polar(1.0, -theta);
    p1[k] = rx.pol1[k] * rot;
    p2[k] = rx.pol2[k] * rot;
  }
  return DualPolSymbolBlock(std::move(p1), std::move(p2));
}

double snr_elec_db(const DualPolSymbolBlock& rx, const DualPolSymbolBlock& tx_ref) {
  const std::size_t ls = rx.size();
  if (ls != tx_ref.size())
    throw std::invalid_argument("snr_elec: block length mismatch");
  cplx num = 0.0;
  double den = 0.0, sig = 0.0;
  for (std::size_t k = 0; k < ls; ++k) {
    num += std::conj(rx.pol1[k]) * tx_ref.pol1[k] +
           std::conj(rx.pol2[k]) * tx_ref.pol2[k];
    den += std::norm(rx.pol1[k]) + std::norm(rx.pol2[k]);
    sig += std::norm(tx_ref.pol1[k]) + std::norm(tx_ref.pol2[k]);
  }
  if (sig <= 0.0) throw std::invalid_argument("snr_elec: zero reference");
  const cplx a = den > 0.0 ? num / den : cplx(0.0);
  double err = 0.0;
  for (std::size_t k = 0; k < ls; ++k) {
    err += std::norm(tx_ref.pol1[k] - a * rx.pol1[k]) +
           std::norm(tx_ref.pol2[k] - a * rx.pol2[k]);
  }
  if (err <= sig * 1e-12) return kSnrCapDb;
  return std::min(kSnrCapDb, 10.0 * std::log10(sig / err));
}

Constellation2D Constellation2D::from_amplitude_distribution(
    const PamAlphabet& alphabet, const std::vector<double>& p_a) {
  const std::size_t na = alphabet.size();
  if (p_a.size() != na)
    throw std::invalid_argument("Constellation2D: distribution size mismatch");
  if ((na & (na - 1)) != 0)
    throw std::invalid_argument("Constellation2D: alphabet size must be a power of two");
  int amp_bits = 0;
  while ((1u << amp_bits) < na) ++amp_bits;

  auto gray = [](unsigned v) { return v ^ (v >> 1); };
  Constellation2D c;
  for (std::size_t ii = 0; ii < na; ++ii)
    for (int si = 0; si < 2; ++si)
      for (std::size_t qi = 0; qi < na; ++qi)
        for (int sq = 0; sq < 2; ++sq) {
          const double re = (si ? -1.0 : 1.0) * alphabet.amplitudes[ii];
          const double im = (sq ? -1.0 : 1.0) * alphabet.amplitudes[qi];
          c.points.emplace_back(re, im);
          c.probs.push_back(0.25 * p_a[ii] * p_a[qi]);
          const unsigned label = (static_cast<unsigned>(si) << (2 * amp_bits + 1)) |
                                 (gray(ii) << (amp_bits + 1)) |
                                 (static_cast<unsigned>(sq) << amp_bits) | gray(qi);
          c.labels.push_back(label);
        }
  c.entropy_bits_2d = entropy_bits(c.probs);
  return c;
}

namespace {

int bits_per_2d(const Constellation2D& c) {
  int b = 0;
  while ((1u << b) < c.points.size()) ++b;
  return b;
}

std::size_t nearest_point(const Constellation2D& c, cplx x) {
  std::size_t best = 0;
  double bd = std::numeric_limits<double>::max();
  for (std::size_t j = 0; j < c.points.size(); ++j) {
    const double d = std::norm(x - c.points[j]);
    if (d < bd) {
      bd = d;
      best = j;
    }
  }
  return best;
}

// per-symbol BMD information loss sum_i log2(num_i/den_i) for one 2D sample
double symbol_bmd_loss(const Constellation2D& c, int nbits, cplx y,
                       unsigned tx_label, double inv_sigma2) {
  const std::size_t np = c.points.size();
  // log q(y|x) + log P(x), up to a common constant
  double lq_max = -std::numeric_limits<double>::infinity();
  static thread_local std::vector<double> lq;
  lq.assign(np, -std::numeric_limits<double>::infinity());
  for (std::size_t j = 0; j < np; ++j) {
    if (c.probs[j] <= 0.0) continue;
    lq[j] = -std::norm(y - c.points[j]) * inv_sigma2 + std::log(c.probs[j]);
    lq_max = std::max(lq_max, lq[j]);
  }
  double total = 0.0;
  for (std::size_t j = 0; j < np; ++j)
    if (lq[j] > -std::numeric_limits<double>::infinity())
      total += std::exp(lq[j] - lq_max);
  const double log_total = std::log(total) + lq_max;

  double loss = 0.0;
  for (int i = 0; i < nbits; ++i) {
    const unsigned bit = (tx_label >> i) & 1u;
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < np; ++j)
      if (((c.labels[j] >> i) & 1u) == bit && lq[j] > m) m = lq[j];
    double s = 0.0;
    for (std::size_t j = 0; j < np; ++j)
      if (((c.labels[j] >> i) & 1u) == bit &&
          lq[j] > -std::numeric_limits<double>::infinity())
        s += std::exp(lq[j] - m);
    const double log_den = std::log(s) + m;
    loss += (log_total - log_den);
  }
  return loss / std::log(2.0);
}

double gmi_one_pol(const std::vector<cplx>& y, const std::vector<cplx>& x,
                   const Constellation2D& c, bool parallel) {
  const std::size_t n = y.size();
  double sigma2 = 0.0;
  for (std::size_t k = 0; k < n; ++k) sigma2 += std::norm(y[k] - x[k]);
  sigma2 /= static_cast<double>(n);
  sigma2 = std::max(sigma2, 1e-30);
  const double inv_sigma2 = 1.0 / sigma2;
  const int nbits = bits_per_2d(c);

  std::vector<double> loss(n);
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k) {
      const unsigned lbl = c.labels[nearest_point(c, x[k])];
      loss[k] = symbol_bmd_loss(c, nbits, y[k], lbl, inv_sigma2);
    }
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      const unsigned lbl = c.labels[nearest_point(c, x[k])];
      loss[k] = symbol_bmd_loss(c, nbits, y[k], lbl, inv_sigma2);
    }
  }
  // serial accumulation keeps the result independent of the thread count
  double mean_loss = 0.0;
  for (double v : loss) mean_loss += v;
  mean_loss /= static_cast<double>(n);
  return std::max(0.0, c.entropy_bits_2d - mean_loss);
}

}  // namespace

double gmi_bmd(const DualPolSymbolBlock& rx, const DualPolSymbolBlock& tx_ref,
               const Constellation2D& constellation) {
  if (rx.size() != tx_ref.size())
    throw std::invalid_argument("gmi_bmd: block length mismatch");
  return gmi_one_pol(rx.pol1, tx_ref.pol1, constellation, true) +
         gmi_one_pol(rx.pol2, tx_ref.pol2, constellation, true);
}

namespace ref {
double gmi_bmd(const DualPolSymbolBlock& rx, const DualPolSymbolBlock& tx_ref,
               const Constellation2D& constellation) {
  if (rx.size() != tx_ref.size())
    throw std::invalid_argument("gmi_bmd: block length mismatch");
  return gmi_one_pol(rx.pol1, tx_ref.pol1, constellation, false) +
         gmi_one_pol(rx.pol2, tx_ref.pol2, constellation, false);
}
}  // namespace ref

}  // namespace dss
