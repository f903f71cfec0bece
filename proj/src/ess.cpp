#include "dss/ess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dss {

namespace {
const mpz_class kZero = 0;
}

PamAlphabet::PamAlphabet(std::vector<int> amps) : amplitudes(std::move(amps)) {
  if (amplitudes.empty()) throw std::invalid_argument("PamAlphabet: empty");
  for (std::size_t i = 0; i < amplitudes.size(); ++i) {
    if (amplitudes[i] <= 0 || amplitudes[i] % 2 == 0)
      throw std::invalid_argument("PamAlphabet: amplitudes must be positive odd");
    if (i > 0 && amplitudes[i] <= amplitudes[i - 1])
      throw std::invalid_argument("PamAlphabet: amplitudes must be strictly ascending");
  }
}

bool PamAlphabet::contains(int a) const { return index_of(a) >= 0; }

int PamAlphabet::index_of(int a) const {
  auto it = std::lower_bound(amplitudes.begin(), amplitudes.end(), a);
  if (it == amplitudes.end() || *it != a) return -1;
  return static_cast<int>(it - amplitudes.begin());
}

EnergyTrellis::EnergyTrellis(int l, PamAlphabet alphabet, int e_max)
    : l_(l), alphabet_(std::move(alphabet)), e_max_(e_max) {
  if (l_ < 1) throw std::invalid_argument("EnergyTrellis: l must be >= 1");
  rows_.resize(l_ + 1);
  rows_[l_] = {mpz_class(1)};  // empty suffix, any budget >= 0
  for (int i = l_ - 1; i >= 0; --i) {
    const int base = row_base(i);
    if (e_max_ < base) continue;  // row stays empty: no suffix fits
    const int nt = (e_max_ - base) / 8 + 1;
    rows_[i].resize(nt);
    for (int t = 0; t < nt; ++t) {
      const int e = base + 8 * t;
      mpz_class sum = 0;
      for (int a : alphabet_.amplitudes) {
        const int e2 = e - a * a;
        if (e2 < 0) break;
        sum += count(i + 1, e2);
      }
      rows_[i][t] = std::move(sum);
    }
  }
  total_ = count(0, e_max_);
  if (total_ == 0) throw std::invalid_argument("infeasible energy bound");
  k_ = static_cast<int>(mpz_sizeinbase(total_.get_mpz_t(), 2)) - 1;
}

const mpz_class& EnergyTrellis::count(int level, int energy_budget) const {
  const auto& row = rows_[level];
  if (row.empty()) return kZero;
  const int base = row_base(level);
  if (energy_budget < base) return kZero;
  std::size_t t = static_cast<std::size_t>((energy_budget - base) / 8);
  if (t >= row.size()) t = row.size() - 1;
  return row[t];
}

std::vector<int> EnergyTrellis::encode(const mpz_class& index) const {
  if (index < 0) throw std::out_of_range("ess encode: negative index");
  mpz_class bound = 1;
  bound <<= k_;
  if (index >= bound) throw std::out_of_range("ess encode: index >= 2^k");

  std::vector<int> seq(l_);
  mpz_class rem = index;
  int budget = e_max_;
  for (int j = 0; j < l_; ++j) {
    bool placed = false;
    for (int a : alphabet_.amplitudes) {
      const int e2 = budget - a * a;
      if (e2 < 0) break;
      const mpz_class& c = count(j + 1, e2);
      if (rem < c) {
        seq[j] = a;
        budget = e2;
        placed = true;
        break;
      }
      rem -= c;
    }
    if (!placed) throw std::logic_error("ess encode: ran out of codewords");
  }
  return seq;
}

mpz_class EnergyTrellis::decode(const std::vector<int>& seq) const {
  if (static_cast<int>(seq.size()) != l_)
    throw std::invalid_argument("ess decode: wrong sequence length");
  long energy = 0;
  for (int a : seq) {
    if (!alphabet_.contains(a))
      throw std::invalid_argument("ess decode: amplitude not in alphabet");
    energy += static_cast<long>(a) * a;
  }
  if (energy > e_max_)
    throw std::invalid_argument("ess decode: energy bound violated");

  mpz_class rank = 0;
  int budget = e_max_;
  for (int j = 0; j < l_; ++j) {
    for (int a : alphabet_.amplitudes) {
      if (a == seq[j]) break;
      const int e2 = budget - a * a;
      if (e2 < 0) continue;
      rank += count(j + 1, e2);
    }
    budget -= seq[j] * seq[j];
  }
  mpz_class bound = 1;
  bound <<= k_;
  if (rank >= bound) throw std::invalid_argument("ess decode: unused codeword");
  return rank;
}

int emax_for_bits(int l, const PamAlphabet& alphabet, int target_bits) {
  if (target_bits < 0) throw std::invalid_argument("emax_for_bits: negative target");
  const int amax = alphabet.amplitudes.back();
  const int e_full = l * amax * amax;
  EnergyTrellis full(l, alphabet, e_full);
  for (int e = l; e <= e_full; e += 8) {
    const mpz_class& c = full.count(0, e);
    if (c == 0) continue;
    const int k = static_cast<int>(mpz_sizeinbase(c.get_mpz_t(), 2)) - 1;
    if (k >= target_bits) return e;
  }
  throw std::invalid_argument("emax_for_bits: target bits unreachable at this block length");
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t tag,
                             std::uint64_t index) {
  std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (tag + 1)) ^
                    (0xc2b2ae3d27d4eb4fULL * (index + 1));
  std::uint64_t st = s;
  splitmix64(st);
  return splitmix64(st);
}

mpz_class random_index_bits(int bits, std::uint64_t& state) {
  if (bits <= 0) return 0;
  const int n_words = (bits + 63) / 64;
  std::vector<std::uint64_t> words(n_words);
  for (auto& w : words) w = splitmix64(state);
  const int top_bits = bits % 64;
  if (top_bits != 0)
    words.back() &= (top_bits == 64) ? ~0ULL : ((1ULL << top_bits) - 1);
  mpz_class out;
  mpz_import(out.get_mpz_t(), words.size(), -1 /*little-endian word order*/,
             sizeof(std::uint64_t), 0, 0, words.data());
  return out;
}

std::vector<double> empirical_amplitude_distribution(const EnergyTrellis& trellis,
                                                     std::int64_t n_samples,
                                                     std::uint64_t seed) {
  if (n_samples < 1)
    throw std::invalid_argument("empirical_amplitude_distribution: n_samples < 1");
  const int k = trellis.shaping_bits();
  const int n_words = k > 0 ? (k + 63) / 64 : 1;

  // Draw all index words serially so the result does not depend on the
  // number of threads, then encode in parallel with integer histograms.
  std::vector<std::uint64_t> words(static_cast<std::size_t>(n_samples) * n_words);
  {
    std::uint64_t state = seed;
    const int top_bits = k % 64;
    for (std::int64_t s = 0; s < n_samples; ++s) {
      for (int w = 0; w < n_words; ++w)
        words[s * n_words + w] = k > 0 ? splitmix64(state) : 0;
      if (k > 0 && top_bits != 0)
        words[s * n_words + n_words - 1] &= (1ULL << top_bits) - 1;
    }
  }

  const std::size_t na = trellis.alphabet().size();
  std::vector<std::int64_t> hist(na, 0);
#pragma omp parallel
  {
    std::vector<std::int64_t> local(na, 0);
#pragma omp for schedule(static)
    for (std::int64_t s = 0; s < n_samples; ++s) {
      mpz_class idx;
      mpz_import(idx.get_mpz_t(), n_words, -1, sizeof(std::uint64_t), 0, 0,
                 &words[s * n_words]);
      for (int a : trellis.encode(idx)) local[trellis.alphabet().index_of(a)]++;
    }
#pragma omp critical
    for (std::size_t i = 0; i < na; ++i) hist[i] += local[i];
  }

  const double total = static_cast<double>(n_samples) * trellis.block_length();
  std::vector<double> p(na);
  for (std::size_t i = 0; i < na; ++i) p[i] = static_cast<double>(hist[i]) / total;
  return p;
}

double entropy_bits(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log2(x);
  return h;
}

}  // namespace dss
