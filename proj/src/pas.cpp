#include "dss/pas.hpp"

#include <stdexcept>

namespace dss {

DmChainConfig::DmChainConfig(int n_, int nu_,
                             std::shared_ptr<const EnergyTrellis> t)
    : n(n_), nu(nu_), trellis(std::move(t)) {
  if (!trellis) throw std::invalid_argument("DmChainConfig: null trellis");
  if (n < 1) throw std::invalid_argument("DmChainConfig: n must be >= 1");
  if (nu < 0 || nu > trellis->shaping_bits())
    throw std::invalid_argument("DmChainConfig: nu out of [0, k]");
  if ((static_cast<long>(n) * trellis->block_length()) % 4 != 0)
    throw std::invalid_argument("DmChainConfig: l*n must be divisible by 4");
}

mpz_class assemble_dm_input(const std::vector<std::uint8_t>& info_bits,
                            int flip_value, int nu, int k) {
  if (static_cast<int>(info_bits.size()) != k - nu)
    throw std::invalid_argument("assemble_dm_input: info bit count != k - nu");
  if (flip_value < 0 || (nu < 31 && flip_value >= (1 << nu)))
    throw std::out_of_range("assemble_dm_input: flip value out of [0, 2^nu)");
  mpz_class idx = flip_value;
  for (std::uint8_t b : info_bits) {
    idx <<= 1;
    idx += (b & 1);
  }
  return idx;
}

DualPolSymbolBlock map_4d(const std::vector<int>& amplitudes,
                          const std::vector<std::uint8_t>& sign_bits) {
  if (amplitudes.size() != sign_bits.size())
    throw std::invalid_argument("map_4d: amplitude/sign length mismatch");
  if (amplitudes.empty() || amplitudes.size() % 4 != 0)
    throw std::invalid_argument("map_4d: length must be a positive multiple of 4");
  const std::size_t ls = amplitudes.size() / 4;
  std::vector<cplx> p1(ls), p2(ls);
  for (std::size_t j = 0; j < ls; ++j) {
    const std::size_t b = 4 * j;
    auto sgn = [&](std::size_t i) { return sign_bits[b + i] ? -1.0 : 1.0; };
    p1[j] = cplx(sgn(0) * amplitudes[b], sgn(1) * amplitudes[b + 1]);
    p2[j] = cplx(sgn(2) * amplitudes[b + 2], sgn(3) * amplitudes[b + 3]);
  }
  return DualPolSymbolBlock(std::move(p1), std::move(p2));
}

namespace {
void demap_component(double v, const PamAlphabet& alphabet, int& amp,
                     std::uint8_t& sign) {
  const double mag = std::abs(v);
  const int rounded = static_cast<int>(std::lround(mag));
  if (std::abs(mag - rounded) > 1e-9 || !alphabet.contains(rounded))
    throw std::invalid_argument("demap_4d: not a constellation point");
  amp = rounded;
  sign = v < 0.0 ? 1 : 0;
}
}  // namespace

void demap_4d(const DualPolSymbolBlock& block, const PamAlphabet& alphabet,
              std::vector<int>& amplitudes, std::vector<std::uint8_t>& sign_bits) {
  const std::size_t ls = block.size();
  amplitudes.assign(4 * ls, 0);
  sign_bits.assign(4 * ls, 0);
  for (std::size_t j = 0; j < ls; ++j) {
    const std::size_t b = 4 * j;
    demap_component(block.pol1[j].real(), alphabet, amplitudes[b], sign_bits[b]);
    demap_component(block.pol1[j].imag(), alphabet, amplitudes[b + 1], sign_bits[b + 1]);
    demap_component(block.pol2[j].real(), alphabet, amplitudes[b + 2], sign_bits[b + 2]);
    demap_component(block.pol2[j].imag(), alphabet, amplitudes[b + 3], sign_bits[b + 3]);
  }
}

double rate_loss_from_entropy(double h_pa, int k, int l, int nu) {
  return h_pa - static_cast<double>(k - nu) / l;
}

double rate_loss(const EnergyTrellis& trellis, int nu) {
  if (nu < 0 || nu > trellis.shaping_bits())
    throw std::invalid_argument("rate_loss: nu out of [0, k]");
  const auto pa =
      empirical_amplitude_distribution(trellis, kRateLossSamples, kRateLossSeed);
  return rate_loss_from_entropy(entropy_bits(pa), trellis.shaping_bits(),
                                trellis.block_length(), nu);
}

std::vector<std::uint8_t> random_bits(int count, std::uint64_t seed) {
  std::vector<std::uint8_t> bits(count);
  std::uint64_t state = seed;
  std::uint64_t word = 0;
  for (int i = 0; i < count; ++i) {
    if (i % 64 == 0) word = splitmix64(state);
    bits[i] = (word >> (i % 64)) & 1;
  }
  return bits;
}

std::vector<std::uint8_t> sign_bit_source(const std::vector<std::uint8_t>& prev_block_bits,
                                          const std::vector<std::uint8_t>& s_bits,
                                          int total, std::uint64_t global_seed) {
  if (static_cast<int>(s_bits.size()) > total)
    throw std::invalid_argument("sign_bit_source: more s bits than sign positions");
  // FNV-1a digest of the previous block keys the parity stub; first block
  // falls back to the global seed.
  std::uint64_t key = global_seed;
  if (!prev_block_bits.empty()) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint8_t b : prev_block_bits) {
      h ^= (b & 1) + 1;
      h *= 0x100000001b3ULL;
    }
    key = substream_seed(global_seed, 0xFEC5, h);
  }
  std::vector<std::uint8_t> out = s_bits;
  const int c_count = total - static_cast<int>(s_bits.size());
  const auto c = random_bits(c_count, key);
  out.insert(out.end(), c.begin(), c.end());
  return out;
}

}  // namespace dss
