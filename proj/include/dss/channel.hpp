#pragma once

// Transmit-side waveform construction and dual-polarization fiber
// propagation. All spectral processing is circular over the full waveform.

#include <cstdint>
#include <vector>

#include "dss/core.hpp"

namespace dss {

struct FiberParams {
  double alpha_db_per_km = 0.2;
  double d_ps_nm_km = 17.0;
  double gamma_w_km = 1.3;       // 1/(W km)
  double pmd_ps_sqrt_km = 0.0;   // 0 disables PMD
  double length_km = 80.0;
  double lambda_nm = 1550.0;
};

struct EdfaParams {
  double gain_db = 0.0;
  double noise_figure_db = 5.0;
  bool ase_on = false;
};

struct LinkPlan {
  std::vector<std::pair<FiberParams, EdfaParams>> spans;
};

// Frequency-domain root-raised-cosine shaping of a symbol block: zero-stuff
// upsampling by sps, then a unit-passband-gain sqrt(raised-cosine) filter.
// Two cascaded rrc filters form an ISI-free raised cosine; the 1/sps gain of
// zero stuffing is restored at symbol-rate decimation in the receiver.
SampledWaveform rrc_shape(const DualPolSymbolBlock& block, double rolloff,
                          int sps, double baud_gbaud);

// Sum of frequency-shifted waveforms. Shifts are applied as circular FFT bin
// rotations (offsets snap to the bin grid). All inputs must share length and
// sample rate; a shifted band reaching past Nyquist is an error.
SampledWaveform frequency_mux(const std::vector<SampledWaveform>& waveforms,
                              const std::vector<double>& offsets_ghz);

// Symmetric split-step integration of the Manakov equation: attenuation and
// dispersion in the frequency domain, joint-polarization Kerr phase with the
// 8/9 averaging factor in the time domain. PMD, when enabled, is a coarse
// per-step waveplate model (seeded random rotations plus DGD accumulating to
// pmd*sqrt(length)).
SampledWaveform ssfm_propagate(const SampledWaveform& w, const FiberParams& fiber,
                               double step_km, std::uint64_t seed);

// Flat gain plus optional ASE: circular complex Gaussian noise per
// polarization with power (G-1)*n_sp*h*nu_opt*B_sim, n_sp = 10^(NF/10)/2,
// over the full simulation bandwidth.
SampledWaveform edfa(const SampledWaveform& w, double gain_db, double nf_db,
                     bool ase_on, double lambda_nm, std::uint64_t seed);

}  // namespace dss
