#pragma once

// Probabilistic amplitude shaping framing: flipping-bit prefixes, cascaded
// DM outputs, 4D mapping of amplitudes and sign bits onto dual-polarization
// QAM symbols, and rate-loss accounting.
//
// 4D mapping convention (fixed interface constant): amplitudes are consumed
// four at a time in order I1,Q1,I2,Q2; sign bit 0 maps to +, 1 to -.
// Slot j of the block is then pol1 = s1*a1 + i*s2*a2, pol2 = s3*a3 + i*s4*a4.

#include <cstdint>
#include <memory>
#include <vector>

#include "dss/core.hpp"
#include "dss/ess.hpp"

namespace dss {

struct DmChainConfig {
  int n = 1;   // cascaded DMs
  int nu = 0;  // flipping bits per DM
  std::shared_ptr<const EnergyTrellis> trellis;

  DmChainConfig(int n_, int nu_, std::shared_ptr<const EnergyTrellis> t);
  int block_length() const { return trellis->block_length(); }
  int total_amplitudes() const { return n * block_length(); }
  int symbols_4d() const { return total_amplitudes() / 4; }
  int info_bits_per_dm() const { return trellis->shaping_bits() - nu; }
};

// DM input index = flip_value * 2^(k-nu) + value(info_bits); flipping bits
// occupy the most significant positions. info_bits are MSB-first.
mpz_class assemble_dm_input(const std::vector<std::uint8_t>& info_bits,
                            int flip_value, int nu, int k);

DualPolSymbolBlock map_4d(const std::vector<int>& amplitudes,
                          const std::vector<std::uint8_t>& sign_bits);

void demap_4d(const DualPolSymbolBlock& block, const PamAlphabet& alphabet,
              std::vector<int>& amplitudes, std::vector<std::uint8_t>& sign_bits);

// R_loss = H(P_a) - (k - nu)/l, bits per 1D symbol. P_a comes from
// empirical_amplitude_distribution with a fixed seed and 2^20 samples unless
// the caller passes a precomputed entropy.
inline constexpr std::uint64_t kRateLossSeed = 0x5eedc0deULL;
inline constexpr std::int64_t kRateLossSamples = 1 << 20;

double rate_loss(const EnergyTrellis& trellis, int nu);
double rate_loss_from_entropy(double h_pa, int k, int l, int nu);

// Sign-bit sourcing: s (information) bits followed by c bits produced by a
// keyed pseudo-random expansion of a digest of the previous block's bits.
// Stands in for the FEC parity of the previous selection block; preserves the
// inter-block dependence without an actual LDPC encoder.
std::vector<std::uint8_t> sign_bit_source(const std::vector<std::uint8_t>& prev_block_bits,
                                          const std::vector<std::uint8_t>& s_bits,
                                          int total, std::uint64_t global_seed);

// Helper: n MSB-first bits from a seeded stream.
std::vector<std::uint8_t> random_bits(int count, std::uint64_t seed);

}  // namespace dss
