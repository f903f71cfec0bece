#include "dss/select.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "dss/rx.hpp"

namespace dss {

CandidateSet enumerate_candidates(const std::vector<std::uint8_t>& info_bits,
                                  const DmChainConfig& chain,
                                  const std::vector<std::uint8_t>& sign_bits,
                                  const std::optional<SubsampleSpec>& subsample) {
  const int n = chain.n, nu = chain.nu;
  const int k = chain.trellis->shaping_bits();
  const int info_per_dm = k - nu;
  if (static_cast<int>(info_bits.size()) != n * info_per_dm)
    throw std::invalid_argument("enumerate_candidates: info bit count != n*(k-nu)");
  if (static_cast<int>(sign_bits.size()) != chain.total_amplitudes())
    throw std::invalid_argument("enumerate_candidates: sign bit count != l*n");

  const int total_flip_bits = nu * n;
  if (total_flip_bits > 62)
    throw std::invalid_argument("enumerate_candidates: flip space too large");
  const std::uint64_t total = 1ULL << total_flip_bits;

  std::vector<std::uint64_t> flip_values;
  if (subsample) {
    if (subsample->size > total)
      throw std::invalid_argument("enumerate_candidates: subsample larger than 2^(nu*n)");
    std::set<std::uint64_t> chosen{0};  // flip vector 0 is always retained
    std::uint64_t state = subsample->seed;
    while (chosen.size() < subsample->size)
      chosen.insert(splitmix64(state) & (total - 1));
    flip_values.assign(chosen.begin(), chosen.end());
  } else {
    if (total_flip_bits > 24)
      throw std::invalid_argument(
          "enumerate_candidates: exhaustive enumeration over 2^24 candidates; use subsampling");
    flip_values.resize(total);
    for (std::uint64_t v = 0; v < total; ++v) flip_values[v] = v;
  }

  CandidateSet set;
  set.sign_bits = sign_bits;
  set.candidates.reserve(flip_values.size());
  for (std::uint64_t fv : flip_values) {
    Candidate cand;
    cand.flip_value = fv;
    cand.flips.resize(n);
    cand.amplitudes.reserve(chain.total_amplitudes());
    for (int d = 0; d < n; ++d) {
      // DM 0 occupies the most significant flip digits
      const int shift = nu * (n - 1 - d);
      cand.flips[d] = static_cast<int>((fv >> shift) & ((1ULL << nu) - 1));
      std::vector<std::uint8_t> info(info_bits.begin() + d * info_per_dm,
                                     info_bits.begin() + (d + 1) * info_per_dm);
      const mpz_class idx = assemble_dm_input(info, cand.flips[d], nu, k);
      const auto amps = chain.trellis->encode(idx);
      cand.amplitudes.insert(cand.amplitudes.end(), amps.begin(), amps.end());
    }
    cand.block = map_4d(cand.amplitudes, sign_bits);
    set.candidates.push_back(std::move(cand));
  }
  return set;
}

namespace {

double evaluate_metric(const Candidate& cand, const SelectorKind& selector) {
  return std::visit(
      [&](const auto& sel) -> double {
        using T = std::decay_t<decltype(sel)>;
        if constexpr (std::is_same_v<T, SelectorKind::None>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, SelectorKind::Edi>) {
          return edi(cand.block, EdiWindow(sel.w));
        } else if constexpr (std::is_same_v<T, SelectorKind::DEdi>) {
          return d_edi(cand.block, EdiWindow(sel.w), sel.schedule);
        } else if constexpr (std::is_same_v<T, SelectorKind::DEdiSingleSpan>) {
          return d_edi_single_span(cand.block, EdiWindow(sel.w), sel.d_ps_nm_km,
                                   sel.lambda_nm, sel.baud_gbaud,
                                   sel.alpha_db_per_km, sel.length_km);
        } else {
          return ssfm_nli_oracle(cand.block, sel.cfg);
        }
      },
      selector.kind);
}

}  // namespace

SelectionResult select_min(const CandidateSet& set, const SelectorKind& selector) {
  if (set.candidates.empty())
    throw std::invalid_argument("select_min: empty candidate set");
  const std::size_t nc = set.candidates.size();
  SelectionResult res;
  res.metrics.assign(nc, 0.0);
  std::vector<std::string> errors(nc);

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(nc); ++i) {
    try {
      res.metrics[i] = evaluate_metric(set.candidates[i], selector);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (std::size_t i = 0; i < nc; ++i)
    if (!errors[i].empty())
      throw std::runtime_error("select_min: candidate " + std::to_string(i) +
                               ": " + errors[i]);

  // deterministic argmin; candidates are in ascending flip order so the
  // first minimum is the lowest flip value
  std::size_t best = 0;
  for (std::size_t i = 1; i < nc; ++i)
    if (res.metrics[i] < res.metrics[best]) best = i;
  res.winner = best;
  return res;
}

std::uint64_t n_s_108(int n, int nu) {
  if (n != 1 && n != 2 && n != 4)
    throw std::invalid_argument("n_s_108: defined for n in {1, 2, 4}");
  if (nu < 0 || nu * n > 58) throw std::invalid_argument("n_s_108: nu out of range");
  return static_cast<std::uint64_t>(4 / n) << (nu * n);
}

double ssfm_nli_oracle(const DualPolSymbolBlock& block, const SsfmOracleConfig& cfg) {
  auto w = rrc_shape(block, cfg.rolloff, cfg.sps, cfg.baud_gbaud);
  w = normalize_power(w, cfg.launch_mw);
  const double span_loss_db = cfg.fiber.alpha_db_per_km * cfg.fiber.length_km;
  for (int s = 0; s < cfg.n_spans; ++s) {
    w = ssfm_propagate(w, cfg.fiber, cfg.step_km, 0);
    w = edfa(w, span_loss_db, 0.0, false, cfg.fiber.lambda_nm, 0);
  }
  w = cdc(w, cfg.fiber.d_ps_nm_km, cfg.fiber.lambda_nm,
          cfg.n_spans * cfg.fiber.length_km);
  const auto rx = extract_and_match(w, 0.0, cfg.baud_gbaud, cfg.rolloff);

  // MMSE residual relative to the transmitted block
  cplx num = 0.0;
  double den = 0.0, sig = 0.0;
  for (std::size_t k = 0; k < rx.size(); ++k) {
    num += std::conj(rx.pol1[k]) * block.pol1[k] +
           std::conj(rx.pol2[k]) * block.pol2[k];
    den += std::norm(rx.pol1[k]) + std::norm(rx.pol2[k]);
    sig += std::norm(block.pol1[k]) + std::norm(block.pol2[k]);
  }
  const cplx a = num / den;
  double err = 0.0;
  for (std::size_t k = 0; k < rx.size(); ++k) {
    err += std::norm(block.pol1[k] - a * rx.pol1[k]) +
           std::norm(block.pol2[k] - a * rx.pol2[k]);
  }
  return err / sig;
}

}  // namespace dss
