#pragma once

// Enumerative sphere shaping distribution matcher. The codebook is the set of
// all length-l sequences over a positive-odd-integer PAM alphabet whose total
// energy sum(a_i^2) does not exceed E_max. Counts are exact (GMP integers);
// encode/decode index the codebook in lexicographic order, using only the
// first 2^k codewords where k = floor(log2 |codebook|).

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace dss {

struct PamAlphabet {
  std::vector<int> amplitudes;  // strictly ascending, positive, odd

  explicit PamAlphabet(std::vector<int> amps);
  std::size_t size() const { return amplitudes.size(); }
  bool contains(int a) const;
  int index_of(int a) const;  // -1 if absent
};

class EnergyTrellis {
 public:
  // Throws "infeasible energy bound" if no sequence fits in E_max.
  EnergyTrellis(int l, PamAlphabet alphabet, int e_max);

  int block_length() const { return l_; }
  int e_max() const { return e_max_; }
  int shaping_bits() const { return k_; }  // k = floor(log2 T(0, E_max))
  const PamAlphabet& alphabet() const { return alphabet_; }
  const mpz_class& codebook_size() const { return total_; }

  // T(i, e): number of length-(l-i) suffixes with energy budget e.
  const mpz_class& count(int level, int energy_budget) const;

  // index in [0, 2^k) -> lexicographic index-th amplitude sequence
  std::vector<int> encode(const mpz_class& index) const;

  // inverse of encode; rejects sequences over the energy bound or with
  // lexicographic rank >= 2^k ("unused codeword")
  mpz_class decode(const std::vector<int>& seq) const;

 private:
  int l_;
  PamAlphabet alphabet_;
  int e_max_;
  int k_;
  mpz_class total_;
  // Row i stores T(i, .) only at reachable budgets. All alphabet entries are
  // odd so squares are 1 mod 8 and a length-(l-i) suffix has energy
  // (l-i) + 8t; the count is a step function between those points.
  // rows_[i][t] = T(i, base(i) + 8t), base(i) = l - i (base(l) = 0).
  std::vector<std::vector<mpz_class>> rows_;

  int row_base(int level) const { return level == l_ ? 0 : l_ - level; }
};

// Smallest E_max for which the trellis reaches at least target_bits shaping
// bits (single full-energy DP, then a scan of the top row).
int emax_for_bits(int l, const PamAlphabet& alphabet, int target_bits);

// Marginal amplitude distribution estimated by encoding n_samples uniform
// k-bit indices from a seeded generator and histogramming all amplitudes.
std::vector<double> empirical_amplitude_distribution(const EnergyTrellis& trellis,
                                                     std::int64_t n_samples,
                                                     std::uint64_t seed);

// Entropy of a probability vector, bits.
double entropy_bits(const std::vector<double>& p);

// Uniform random integer in [0, 2^bits) from a 64-bit word source.
mpz_class random_index_bits(int bits, std::uint64_t& state);

// splitmix64 step; the project-wide substream derivation primitive.
std::uint64_t splitmix64(std::uint64_t& state);

// Derives an independent substream seed from (seed, tag, index).
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t tag,
                             std::uint64_t index);

}  // namespace dss
