#pragma once

// Candidate-sequence enumeration through flipping bits, metric-based
// selection (E-SS, D-SS, SSFM oracle), and the per-108-4D-symbol selection
// complexity metric.

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "dss/channel.hpp"
#include "dss/core.hpp"
#include "dss/metrics.hpp"
#include "dss/pas.hpp"

namespace dss {

struct Candidate {
  std::vector<int> flips;       // per-DM flip values
  std::uint64_t flip_value;     // flips packed as one integer (DM 0 most significant)
  std::vector<int> amplitudes;  // l*n values
  DualPolSymbolBlock block;
};

struct CandidateSet {
  std::vector<Candidate> candidates;  // ascending flip_value
  std::vector<std::uint8_t> sign_bits;
};

struct SubsampleSpec {
  std::uint64_t size;
  std::uint64_t seed;
};

// Noiseless single-channel single-carrier propagation setup for the SSFM
// selection oracle.
struct SsfmOracleConfig {
  FiberParams fiber;       // one span; length_km is the span length
  int n_spans = 1;
  double step_km = 1.0;
  double baud_gbaud = 13.75;
  double rolloff = 0.1;
  int sps = 2;
  double launch_mw = 1.0;
};

struct SelectorKind {
  struct None {};
  struct Edi {
    int w;
  };
  struct DEdi {
    int w;
    DispersionSchedule schedule;
  };
  struct DEdiSingleSpan {
    int w;
    double d_ps_nm_km, lambda_nm, baud_gbaud, alpha_db_per_km, length_km;
  };
  struct SsfmNli {
    SsfmOracleConfig cfg;
  };
  std::variant<None, Edi, DEdi, DEdiSingleSpan, SsfmNli> kind;
};

// All 2^(nu*n) flip vectors (or a seeded uniform subset of the given size
// that always keeps flip vector 0), each expanded to a mapped candidate
// block sharing the same sign bits.
CandidateSet enumerate_candidates(const std::vector<std::uint8_t>& info_bits,
                                  const DmChainConfig& chain,
                                  const std::vector<std::uint8_t>& sign_bits,
                                  const std::optional<SubsampleSpec>& subsample);

struct SelectionResult {
  std::size_t winner;
  std::vector<double> metrics;
};

// Argmin of the selector metric over the candidate set; ties break toward the
// lowest flip value. Metric evaluations run in parallel; the reduction is a
// deterministic scan in candidate order.
SelectionResult select_min(const CandidateSet& set, const SelectorKind& selector);

// N_S_108 = (4/n) * 2^(nu*n), the number of tested sequences per 108 4D
// symbols; defined for n in {1, 2, 4}.
std::uint64_t n_s_108(int n, int nu);

// Propagates the block through a noiseless nonlinear channel, applies ideal
// CDC and matched filtering, and returns the MMSE residual power per symbol
// (the NLI proxy used by SSFM-based selection).
double ssfm_nli_oracle(const DualPolSymbolBlock& block, const SsfmOracleConfig& cfg);

}  // namespace dss
