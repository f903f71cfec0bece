#include "dss/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "dss/rx.hpp"

namespace dss {

using nlohmann::json;

namespace {

// substream tags
constexpr std::uint64_t kTagInfo = 0x11;
constexpr std::uint64_t kTagSign = 0x22;
constexpr std::uint64_t kTagFec = 0x33;
constexpr std::uint64_t kTagAse = 0x44;
constexpr std::uint64_t kTagSubsample = 0x55;

// ---- trellis / distribution caches -----------------------------------------

struct TrellisBundle {
  std::shared_ptr<const EnergyTrellis> trellis;
  std::vector<double> p_a;
  double entropy = 0.0;
};

std::mutex g_cache_mutex;
std::map<std::string, std::shared_ptr<TrellisBundle>> g_trellis_cache;

std::string trellis_key(int l, int e_max, const std::vector<int>& alphabet) {
  std::string k = std::to_string(l) + ":" + std::to_string(e_max);
  for (int a : alphabet) k += "," + std::to_string(a);
  return k;
}

std::shared_ptr<TrellisBundle> get_trellis(const DmConfig& dm) {
  PamAlphabet alphabet(dm.alphabet);
  int e_max = dm.e_max;
  if (e_max == 0) {
    const int target = static_cast<int>(
        std::ceil(dm.target_rate_bits_per_amp * dm.l - 1e-9));
    e_max = emax_for_bits(dm.l, alphabet, target);
  }
  const std::string key = trellis_key(dm.l, e_max, dm.alphabet);
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = g_trellis_cache.find(key);
    if (it != g_trellis_cache.end()) return it->second;
  }
  auto bundle = std::make_shared<TrellisBundle>();
  bundle->trellis = std::make_shared<EnergyTrellis>(dm.l, alphabet, e_max);
  bundle->p_a = empirical_amplitude_distribution(*bundle->trellis,
                                                 kRateLossSamples, kRateLossSeed);
  bundle->entropy = entropy_bits(bundle->p_a);
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto [it, inserted] = g_trellis_cache.emplace(key, bundle);
  return it->second;
}

// ---- config plumbing -------------------------------------------------------

std::vector<int> default_schedule(const ExperimentConfig& cfg) {
  std::vector<int> s(cfg.link.n_spans);
  for (int i = 0; i < cfg.link.n_spans; ++i) s[i] = i;
  return s;
}

SelectorKind build_selector(const ExperimentConfig& cfg, double power_mw_per_sub) {
  const auto& sel = cfg.selector;
  const double baud = cfg.grid.subcarrier_baud_gbaud;
  if (sel.kind == "none") return SelectorKind{SelectorKind::None{}};
  if (sel.kind == "edi") return SelectorKind{SelectorKind::Edi{sel.w}};
  if (sel.kind == "d_edi") {
    if (cfg.scenario == "single_span" && sel.single_span_leff) {
      return SelectorKind{SelectorKind::DEdiSingleSpan{
          sel.w, cfg.link.d_ps_nm_km, cfg.link.lambda_nm, baud,
          cfg.link.alpha_db_per_km, cfg.link.span_km}};
    }
    auto indices = sel.schedule.empty() ? default_schedule(cfg) : sel.schedule;
    return SelectorKind{SelectorKind::DEdi{
        sel.w, DispersionSchedule(cfg.link.d_ps_nm_km, cfg.link.lambda_nm,
                                  cfg.link.span_km, baud, std::move(indices))}};
  }
  if (sel.kind == "ssfm_nli") {
    SsfmOracleConfig oc;
    oc.fiber = {cfg.link.alpha_db_per_km, cfg.link.d_ps_nm_km, cfg.link.gamma_w_km,
                0.0, cfg.link.span_km, cfg.link.lambda_nm};
    oc.n_spans = cfg.link.n_spans;
    oc.step_km = sel.oracle_step_km;
    oc.baud_gbaud = baud;
    oc.rolloff = cfg.grid.rolloff;
    oc.sps = 2;
    oc.launch_mw = power_mw_per_sub;
    return SelectorKind{SelectorKind::SsfmNli{std::move(oc)}};
  }
  throw std::invalid_argument("unknown selector kind: " + cfg.selector.kind);
}

// bit representation of a winner block (signs plus amplitude indices),
// used only to key the parity stub of the next block
std::vector<std::uint8_t> winner_bits(const Candidate& cand,
                                      const std::vector<std::uint8_t>& signs,
                                      const PamAlphabet& alphabet) {
  std::vector<std::uint8_t> bits;
  bits.reserve(3 * cand.amplitudes.size());
  for (std::size_t i = 0; i < cand.amplitudes.size(); ++i) {
    const unsigned idx = static_cast<unsigned>(alphabet.index_of(cand.amplitudes[i]));
    bits.push_back(signs[i]);
    bits.push_back(idx & 1);
    bits.push_back((idx >> 1) & 1);
  }
  return bits;
}

struct SelectedSequence {
  std::vector<cplx> pol1, pol2;
  double mean_metric = 0.0;
  double mean_eval_d_edi = 0.0;
  int n_blocks = 0;
};

// Runs the sequential per-block pipeline for one wavelength channel:
// frame -> candidates -> select -> concatenate. Blocks are chained through
// the sign-bit parity stub, so this loop is inherently sequential.
SelectedSequence build_selected_sequence(const ExperimentConfig& cfg,
                                         const TrellisBundle& bundle,
                                         const SelectorKind& selector,
                                         int channel_index) {
  const DmChainConfig chain(cfg.dm.n, cfg.dm.nu, bundle.trellis);
  const int spb = chain.symbols_4d();
  const int n_blocks = (cfg.n_4d_symbols + spb - 1) / spb;
  const int k = bundle.trellis->shaping_bits();
  const int info_per_block = cfg.dm.n * (k - cfg.dm.nu);
  const int total_signs = chain.total_amplitudes();
  const int s_count = static_cast<int>(std::llround(cfg.sign_info_ratio * total_signs));

  const EdiWindow eval_w(2);
  std::optional<DispersionSchedule> eval_schedule;
  if (cfg.scenario == "multi_span")
    eval_schedule.emplace(cfg.link.d_ps_nm_km, cfg.link.lambda_nm, cfg.link.span_km,
                          cfg.grid.subcarrier_baud_gbaud, default_schedule(cfg));

  std::optional<SubsampleSpec> subsample = cfg.selector.subsample;
  if (subsample)
    subsample->seed = substream_seed(cfg.seed, kTagSubsample, channel_index);

  SelectedSequence out;
  out.n_blocks = n_blocks;
  out.pol1.reserve(static_cast<std::size_t>(n_blocks) * spb);
  out.pol2.reserve(static_cast<std::size_t>(n_blocks) * spb);

  std::vector<std::uint8_t> prev_bits;
  const std::uint64_t ch_base = static_cast<std::uint64_t>(channel_index) << 32;
  for (int b = 0; b < n_blocks; ++b) {
    const auto info = random_bits(
        info_per_block, substream_seed(cfg.seed, kTagInfo, ch_base | b));
    const auto s_bits =
        random_bits(s_count, substream_seed(cfg.seed, kTagSign, ch_base | b));
    const auto signs = sign_bit_source(
        prev_bits, s_bits, total_signs,
        substream_seed(cfg.seed, kTagFec, channel_index));

    const auto set = enumerate_candidates(info, chain, signs, subsample);
    const auto sel = select_min(set, selector);
    const auto& winner = set.candidates[sel.winner];

    out.mean_metric += sel.metrics[sel.winner];
    if (eval_schedule)
      out.mean_eval_d_edi += d_edi(winner.block, eval_w, *eval_schedule);
    else
      out.mean_eval_d_edi += d_edi_single_span(
          winner.block, eval_w, cfg.link.d_ps_nm_km, cfg.link.lambda_nm,
          cfg.grid.subcarrier_baud_gbaud, cfg.link.alpha_db_per_km,
          cfg.link.span_km);

    out.pol1.insert(out.pol1.end(), winner.block.pol1.begin(), winner.block.pol1.end());
    out.pol2.insert(out.pol2.end(), winner.block.pol2.begin(), winner.block.pol2.end());
    prev_bits = winner_bits(winner, signs, bundle.trellis->alphabet());
  }
  out.mean_metric /= n_blocks;
  out.mean_eval_d_edi /= n_blocks;
  return out;
}

ResultRow run_point(const ExperimentConfig& cfg, const std::string& sweep_var,
                    const std::string& sweep_value) {
  const auto t0 = std::chrono::steady_clock::now();
  cfg.validate();

  const auto bundle = get_trellis(cfg.dm);
  const double power_mw = dbm_to_mw(cfg.power_dbm);
  const double power_per_sub = power_mw / cfg.grid.n_subcarriers;
  const SelectorKind selector = build_selector(cfg, power_per_sub);

  // per-channel selected sequences; subcarriers of one channel reuse the
  // channel's sequence
  std::vector<SelectedSequence> per_channel(cfg.grid.n_wdm);
  for (int c = 0; c < cfg.grid.n_wdm; ++c)
    per_channel[c] = build_selected_sequence(cfg, *bundle, selector, c);

  const double baud = cfg.grid.subcarrier_baud_gbaud;
  const double sub_spacing = cfg.grid.subcarrier_spacing_ghz > 0.0
                                 ? cfg.grid.subcarrier_spacing_ghz
                                 : (1.0 + cfg.grid.rolloff) * baud;
  std::vector<SampledWaveform> waveforms;
  std::vector<double> offsets;
  for (int c = 0; c < cfg.grid.n_wdm; ++c) {
    DualPolSymbolBlock seq(per_channel[c].pol1, per_channel[c].pol2);
    auto shaped = rrc_shape(seq, cfg.grid.rolloff, cfg.grid.samples_per_symbol, baud);
    shaped = normalize_power(shaped, power_per_sub);
    for (int s = 0; s < cfg.grid.n_subcarriers; ++s) {
      const double off =
          (c - (cfg.grid.n_wdm - 1) / 2.0) * cfg.grid.wdm_spacing_ghz +
          (s - (cfg.grid.n_subcarriers - 1) / 2.0) * sub_spacing;
      waveforms.push_back(shaped);
      offsets.push_back(off);
    }
  }
  auto w = frequency_mux(waveforms, offsets);

  FiberParams fiber{cfg.link.alpha_db_per_km, cfg.link.d_ps_nm_km,
                    cfg.link.gamma_w_km, cfg.link.pmd_ps_sqrt_km,
                    cfg.link.span_km, cfg.link.lambda_nm};
  const double span_gain_db = cfg.link.alpha_db_per_km * cfg.link.span_km;
  for (int s = 0; s < cfg.link.n_spans; ++s) {
    w = ssfm_propagate(w, fiber, cfg.link.step_km,
                       substream_seed(cfg.seed, kTagAse, 2 * s));
    w = edfa(w, span_gain_db, cfg.link.edfa_nf_db, cfg.link.ase_on,
             cfg.link.lambda_nm, substream_seed(cfg.seed, kTagAse, 2 * s + 1));
  }

  // receiver: center channel, center subcarrier
  const int meas_ch = (cfg.grid.n_wdm - 1) / 2;
  const int meas_sub = (cfg.grid.n_subcarriers - 1) / 2;
  const double meas_off =
      (meas_ch - (cfg.grid.n_wdm - 1) / 2.0) * cfg.grid.wdm_spacing_ghz +
      (meas_sub - (cfg.grid.n_subcarriers - 1) / 2.0) * sub_spacing;
  w = cdc(w, cfg.link.d_ps_nm_km, cfg.link.lambda_nm,
          cfg.link.n_spans * cfg.link.span_km);
  auto rx_block = extract_and_match(w, meas_off, baud, cfg.grid.rolloff);
  DualPolSymbolBlock tx_ref(per_channel[meas_ch].pol1, per_channel[meas_ch].pol2);
  rx_block = genie_equalize(rx_block, tx_ref);
  if (cfg.rx.cpr_on) rx_block = cpr_data_aided(rx_block, tx_ref, cfg.rx.cpr_window);

  const auto constellation = Constellation2D::from_amplitude_distribution(
      bundle->trellis->alphabet(), bundle->p_a);

  ResultRow row;
  row.scenario = cfg.scenario;
  row.sweep_var = sweep_var;
  row.sweep_value = sweep_value;
  row.power_dbm = cfg.power_dbm;
  row.l = cfg.dm.l;
  row.n_dms = cfg.dm.n;
  row.nu = cfg.dm.nu;
  row.selector = cfg.selector.kind;
  row.w = cfg.selector.w;
  {
    std::string s;
    const auto sched = cfg.selector.schedule.empty() && cfg.scenario == "multi_span"
                           ? default_schedule(cfg)
                           : cfg.selector.schedule;
    for (std::size_t i = 0; i < sched.size(); ++i)
      s += (i ? ";" : "") + std::to_string(sched[i]);
    row.schedule = s;
  }
  row.subsample = cfg.selector.subsample ? cfg.selector.subsample->size : 0;
  row.n_blocks = per_channel[meas_ch].n_blocks;
  row.n_4d_symbols = static_cast<int>(tx_ref.size());
  row.e_max = bundle->trellis->e_max();
  row.k = bundle->trellis->shaping_bits();
  row.seed = cfg.seed;
  row.snr_elec_db = snr_elec_db(rx_block, tx_ref);
  row.gmi_bits_per_4d = gmi_bmd(rx_block, tx_ref, constellation);
  row.rate_loss_bits_per_4d =
      4.0 * rate_loss_from_entropy(bundle->entropy, bundle->trellis->shaping_bits(),
                                   cfg.dm.l, cfg.dm.nu);
  row.air_bits_per_4d = row.gmi_bits_per_4d - row.rate_loss_bits_per_4d;
  row.mean_metric_of_winner = per_channel[meas_ch].mean_metric;
  row.mean_eval_d_edi = per_channel[meas_ch].mean_eval_d_edi;
  if (cfg.include_timing) {
    row.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return row;
}

std::vector<int> parse_index_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ';')) out.push_back(std::stoi(tok));
  return out;
}

ExperimentConfig apply_sweep_value(const ExperimentConfig& base,
                                   const std::string& var,
                                   const std::string& value) {
  ExperimentConfig cfg = base;
  cfg.sweep.reset();
  if (var == "power_dbm") {
    cfg.power_dbm = std::stod(value);
  } else if (var == "w") {
    cfg.selector.w = std::stoi(value);
  } else if (var == "nu") {
    cfg.dm.nu = std::stoi(value);
  } else if (var == "n") {
    cfg.dm.n = std::stoi(value);
  } else if (var == "m_d") {
    const int m = std::stoi(value);
    cfg.selector.schedule.clear();
    for (int i = 0; i <= m; ++i) cfg.selector.schedule.push_back(i);
    cfg.selector.single_span_leff = false;
  } else if (var == "schedule") {
    cfg.selector.schedule = parse_index_list(value);
    cfg.selector.single_span_leff = false;
  } else if (var == "block_length") {
    cfg.dm.l = std::stoi(value);
  } else if (var == "sequence_length") {
    const int ls = std::stoi(value);
    if ((4 * ls) % cfg.dm.l != 0)
      throw std::invalid_argument("sweep sequence_length: 4*L_s not a multiple of l");
    cfg.dm.n = 4 * ls / cfg.dm.l;
  } else if (var == "subsample_size") {
    const long sz = std::stol(value);
    if (sz <= 0)
      cfg.selector.subsample.reset();
    else
      cfg.selector.subsample = SubsampleSpec{static_cast<std::uint64_t>(sz), 0};
  } else {
    throw std::invalid_argument("unknown sweep variable: " + var);
  }
  return cfg;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (scenario != "single_span" && scenario != "multi_span")
    throw std::invalid_argument("config: scenario must be single_span or multi_span");
  if (grid.n_wdm < 1 || grid.n_subcarriers < 1)
    throw std::invalid_argument("config: grid counts must be >= 1");
  if (grid.rolloff < 0.0 || grid.rolloff >= 1.0)
    throw std::invalid_argument("config: rolloff out of [0,1)");
  if (grid.samples_per_symbol < 2)
    throw std::invalid_argument("config: samples_per_symbol must be >= 2");
  if (link.n_spans < 1 || link.span_km <= 0.0 || link.step_km <= 0.0)
    throw std::invalid_argument("config: bad link geometry");
  if (dm.l < 1 || dm.n < 1 || dm.nu < 0)
    throw std::invalid_argument("config: bad DM parameters");
  if ((static_cast<long>(dm.l) * dm.n) % 4 != 0)
    throw std::invalid_argument("config: l*n must be divisible by 4");
  if (n_4d_symbols < 1) throw std::invalid_argument("config: n_4d_symbols < 1");
  if (sign_info_ratio < 0.0 || sign_info_ratio > 1.0)
    throw std::invalid_argument("config: sign_info_ratio out of [0,1]");
  if (selector.kind != "none" && selector.kind != "edi" &&
      selector.kind != "d_edi" && selector.kind != "ssfm_nli")
    throw std::invalid_argument("config: unknown selector kind");
  for (int idx : selector.schedule)
    if (idx < 0 || idx > link.n_spans)
      throw std::invalid_argument("config: schedule index outside link");
  // the full grid must fit under Nyquist
  const double fs = grid.samples_per_symbol * grid.subcarrier_baud_gbaud;
  const double sub_spacing = grid.subcarrier_spacing_ghz > 0.0
                                 ? grid.subcarrier_spacing_ghz
                                 : (1.0 + grid.rolloff) * grid.subcarrier_baud_gbaud;
  const double max_off = (grid.n_wdm - 1) / 2.0 * grid.wdm_spacing_ghz +
                         (grid.n_subcarriers - 1) / 2.0 * sub_spacing;
  const double edge =
      max_off + (1.0 + grid.rolloff) * grid.subcarrier_baud_gbaud / 2.0;
  if (edge > fs / 2.0 + 1e-9)
    throw std::invalid_argument("config: WDM/subcarrier grid exceeds Nyquist band");
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<std::pair<std::string, std::string>> points;
  if (cfg.sweep) {
    if (cfg.sweep->values.empty())
      throw std::invalid_argument("config: sweep with no values");
    for (const auto& v : cfg.sweep->values) points.emplace_back(cfg.sweep->var, v);
  } else {
    points.emplace_back("", "");
  }
  // validate every point up front: a bad sweep value must fail before any
  // simulation starts
  std::vector<ExperimentConfig> configs;
  for (const auto& [var, value] : points) {
    ExperimentConfig pc = var.empty() ? cfg : apply_sweep_value(cfg, var, value);
    pc.validate();
    configs.push_back(std::move(pc));
  }

  std::vector<ResultRow> rows(points.size());
  std::vector<std::string> errors(points.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(points.size()); ++i) {
    try {
      rows[i] = run_point(configs[i], points[i].first, points[i].second);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (std::size_t i = 0; i < points.size(); ++i)
    if (!errors[i].empty())
      throw std::runtime_error("sweep point " + std::to_string(i) + " (" +
                               points[i].first + "=" + points[i].second +
                               "): " + errors[i]);
  return rows;
}

// ---- JSON ------------------------------------------------------------------

namespace {

template <typename T>
void get_to_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) j.at(key).get_to(out);
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& json_text) {
  json j = json::parse(json_text);
  ExperimentConfig cfg;
  get_to_if(j, "scenario", cfg.scenario);
  get_to_if(j, "power_dbm", cfg.power_dbm);
  get_to_if(j, "sign_info_ratio", cfg.sign_info_ratio);
  get_to_if(j, "n_4d_symbols", cfg.n_4d_symbols);
  get_to_if(j, "seed", cfg.seed);
  get_to_if(j, "include_timing", cfg.include_timing);
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    get_to_if(g, "n_wdm", cfg.grid.n_wdm);
    get_to_if(g, "wdm_spacing_ghz", cfg.grid.wdm_spacing_ghz);
    get_to_if(g, "n_subcarriers", cfg.grid.n_subcarriers);
    get_to_if(g, "subcarrier_baud_gbaud", cfg.grid.subcarrier_baud_gbaud);
    get_to_if(g, "subcarrier_spacing_ghz", cfg.grid.subcarrier_spacing_ghz);
    get_to_if(g, "rolloff", cfg.grid.rolloff);
    get_to_if(g, "samples_per_symbol", cfg.grid.samples_per_symbol);
  }
  if (j.contains("link")) {
    const auto& l = j["link"];
    get_to_if(l, "n_spans", cfg.link.n_spans);
    get_to_if(l, "span_km", cfg.link.span_km);
    get_to_if(l, "alpha_db_per_km", cfg.link.alpha_db_per_km);
    get_to_if(l, "d_ps_nm_km", cfg.link.d_ps_nm_km);
    get_to_if(l, "gamma_w_km", cfg.link.gamma_w_km);
    get_to_if(l, "pmd_ps_sqrt_km", cfg.link.pmd_ps_sqrt_km);
    get_to_if(l, "lambda_nm", cfg.link.lambda_nm);
    get_to_if(l, "edfa_nf_db", cfg.link.edfa_nf_db);
    get_to_if(l, "ase_on", cfg.link.ase_on);
    get_to_if(l, "step_km", cfg.link.step_km);
  }
  if (j.contains("dm")) {
    const auto& d = j["dm"];
    get_to_if(d, "l", cfg.dm.l);
    get_to_if(d, "n", cfg.dm.n);
    get_to_if(d, "nu", cfg.dm.nu);
    get_to_if(d, "target_rate_bits_per_amp", cfg.dm.target_rate_bits_per_amp);
    get_to_if(d, "alphabet", cfg.dm.alphabet);
    get_to_if(d, "e_max", cfg.dm.e_max);
  }
  if (j.contains("selector")) {
    const auto& s = j["selector"];
    get_to_if(s, "kind", cfg.selector.kind);
    get_to_if(s, "w", cfg.selector.w);
    get_to_if(s, "schedule", cfg.selector.schedule);
    get_to_if(s, "single_span_leff", cfg.selector.single_span_leff);
    get_to_if(s, "oracle_step_km", cfg.selector.oracle_step_km);
    if (s.contains("subsample") && !s["subsample"].is_null()) {
      SubsampleSpec sub{0, 0};
      s["subsample"].at("size").get_to(sub.size);
      get_to_if(s["subsample"], "seed", sub.seed);
      cfg.selector.subsample = sub;
    }
  }
  if (j.contains("rx")) {
    get_to_if(j["rx"], "cpr_on", cfg.rx.cpr_on);
    get_to_if(j["rx"], "cpr_window", cfg.rx.cpr_window);
  }
  if (j.contains("sweep") && !j["sweep"].is_null()) {
    SweepSpec sw;
    j["sweep"].at("var").get_to(sw.var);
    for (const auto& v : j["sweep"].at("values")) {
      if (v.is_string())
        sw.values.push_back(v.get<std::string>());
      else if (v.is_array()) {
        std::string s;
        for (const auto& x : v) s += (s.empty() ? "" : ";") + x.dump();
        sw.values.push_back(s);
      } else {
        sw.values.push_back(v.dump());
      }
    }
    cfg.sweep = std::move(sw);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_json(ss.str());
}

std::string resolved_config_json(const ExperimentConfig& cfg) {
  const auto bundle = get_trellis(cfg.dm);
  json j;
  j["scenario"] = cfg.scenario;
  j["power_dbm"] = cfg.power_dbm;
  j["sign_info_ratio"] = cfg.sign_info_ratio;
  j["n_4d_symbols"] = cfg.n_4d_symbols;
  j["seed"] = cfg.seed;
  j["grid"] = {{"n_wdm", cfg.grid.n_wdm},
               {"wdm_spacing_ghz", cfg.grid.wdm_spacing_ghz},
               {"n_subcarriers", cfg.grid.n_subcarriers},
               {"subcarrier_baud_gbaud", cfg.grid.subcarrier_baud_gbaud},
               {"subcarrier_spacing_ghz", cfg.grid.subcarrier_spacing_ghz},
               {"rolloff", cfg.grid.rolloff},
               {"samples_per_symbol", cfg.grid.samples_per_symbol}};
  j["link"] = {{"n_spans", cfg.link.n_spans},
               {"span_km", cfg.link.span_km},
               {"alpha_db_per_km", cfg.link.alpha_db_per_km},
               {"d_ps_nm_km", cfg.link.d_ps_nm_km},
               {"gamma_w_km", cfg.link.gamma_w_km},
               {"pmd_ps_sqrt_km", cfg.link.pmd_ps_sqrt_km},
               {"lambda_nm", cfg.link.lambda_nm},
               {"edfa_nf_db", cfg.link.edfa_nf_db},
               {"ase_on", cfg.link.ase_on},
               {"step_km", cfg.link.step_km}};
  j["dm"] = {{"l", cfg.dm.l},
             {"n", cfg.dm.n},
             {"nu", cfg.dm.nu},
             {"target_rate_bits_per_amp", cfg.dm.target_rate_bits_per_amp},
             {"alphabet", cfg.dm.alphabet},
             {"e_max", bundle->trellis->e_max()},
             {"k", bundle->trellis->shaping_bits()}};
  j["selector"] = {{"kind", cfg.selector.kind},
                   {"w", cfg.selector.w},
                   {"schedule", cfg.selector.schedule},
                   {"single_span_leff", cfg.selector.single_span_leff},
                   {"oracle_step_km", cfg.selector.oracle_step_km}};
  if (cfg.selector.subsample)
    j["selector"]["subsample"] = {{"size", cfg.selector.subsample->size},
                                  {"seed", cfg.selector.subsample->seed}};
  j["rx"] = {{"cpr_on", cfg.rx.cpr_on}, {"cpr_window", cfg.rx.cpr_window}};
  if (cfg.sweep) j["sweep"] = {{"var", cfg.sweep->var}, {"values", cfg.sweep->values}};
  return j.dump();
}

// ---- CSV -------------------------------------------------------------------

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

std::string csv_string(const std::vector<ResultRow>& rows,
                       const std::string& config_echo) {
  if (rows.empty()) throw std::invalid_argument("csv: no rows");
  std::string out = "# config: " + config_echo + "\n";
  out +=
      "scenario,sweep_var,sweep_value,power_dbm,l,n_dms,nu,selector,w,schedule,"
      "subsample,n_blocks,n_4d_symbols,e_max,k,seed,snr_elec_db,gmi_bits_per_4d,"
      "rate_loss_bits_per_4d,air_bits_per_4d,mean_metric_of_winner,"
      "mean_eval_d_edi,wall_time_s\n";
  for (const auto& r : rows) {
    out += csv_quote(r.scenario) + "," + csv_quote(r.sweep_var) + "," +
           csv_quote(r.sweep_value) + "," + num(r.power_dbm) + "," +
           std::to_string(r.l) + "," + std::to_string(r.n_dms) + "," +
           std::to_string(r.nu) + "," + csv_quote(r.selector) + "," +
           std::to_string(r.w) + "," + csv_quote(r.schedule) + "," +
           std::to_string(r.subsample) + "," + std::to_string(r.n_blocks) + "," +
           std::to_string(r.n_4d_symbols) + "," + std::to_string(r.e_max) + "," +
           std::to_string(r.k) + "," + std::to_string(r.seed) + "," +
           num(r.snr_elec_db) + "," + num(r.gmi_bits_per_4d) + "," +
           num(r.rate_loss_bits_per_4d) + "," + num(r.air_bits_per_4d) + "," +
           num(r.mean_metric_of_winner) + "," + num(r.mean_eval_d_edi) + "," +
           num(r.wall_time_s) + "\n";
  }
  return out;
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& config_echo,
              const std::string& path) {
  const std::string text = csv_string(rows, config_echo);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("csv: cannot open output path: " + path);
  out << text;
  if (!out) throw std::runtime_error("csv: write failed: " + path);
}

}  // namespace dss
