#pragma once

// Receiver chain: channel extraction and matched filtering, chromatic
// dispersion compensation, genie-aided 2x2 equalization, data-aided carrier
// phase recovery, electrical SNR and GMI under bit-metric decoding.

#include <vector>

#include "dss/core.hpp"
#include "dss/ess.hpp"

namespace dss {

// Frequency shift by -offset (circular bin rotation), RRC matched filter,
// symbol-rate decimation with known timing. Restores the 1/sps zero-stuffing
// gain so a back-to-back tx/rx pair is the identity.
DualPolSymbolBlock extract_and_match(const SampledWaveform& w, double offset_ghz,
                                     double baud_gbaud, double rolloff);

// Dispersion compensation on a waveform (applies the inverse all-pass filter
// of a length-z fiber at the waveform's own sample rate).
SampledWaveform cdc(const SampledWaveform& w, double d_ps_nm_km, double lambda_nm,
                    double total_length_km);

// Single-tap 2x2 LS equalizer computed against the known transmit block.
DualPolSymbolBlock genie_equalize(const DualPolSymbolBlock& rx,
                                  const DualPolSymbolBlock& tx_ref);

// Fully data-aided CPR: per-symbol phase from a centered window (truncated at
// the block edges) of <y, x> sums taken jointly over both polarizations.
DualPolSymbolBlock cpr_data_aided(const DualPolSymbolBlock& rx,
                                  const DualPolSymbolBlock& tx_ref, int window);

// SNR from the MMSE-scaled residual, dB, capped at 120 dB.
inline constexpr double kSnrCapDb = 120.0;
double snr_elec_db(const DualPolSymbolBlock& rx, const DualPolSymbolBlock& tx_ref);

// 64-QAM constellation with per-2D product distribution built from the 1D
// amplitude distribution. Labeling: per I/Q rail 3 bits, sign bit first
// (0 -> +), then the Gray code (00,01,11,10) of the amplitude index.
struct Constellation2D {
  std::vector<cplx> points;       // 64 points, odd-integer grid
  std::vector<double> probs;      // matching probabilities, sum 1
  std::vector<unsigned> labels;   // 6-bit labels, [sign_i amp_i(2) sign_q amp_q(2)]
  double entropy_bits_2d = 0.0;

  static Constellation2D from_amplitude_distribution(const PamAlphabet& alphabet,
                                                     const std::vector<double>& p_a);
};

// GMI under bit-metric decoding with a mismatched Gaussian decoder whose
// variance is estimated per polarization from the equalized constellation.
// Returns bits per 4D symbol (pol1 + pol2), clamped to >= 0.
double gmi_bmd(const DualPolSymbolBlock& rx, const DualPolSymbolBlock& tx_ref,
               const Constellation2D& constellation);

namespace ref {
// Serial single-thread GMI evaluation, kept as the reference for the
// OpenMP kernel above.
double gmi_bmd(const DualPolSymbolBlock& rx, const DualPolSymbolBlock& tx_ref,
               const Constellation2D& constellation);
}  // namespace ref

}  // namespace dss
