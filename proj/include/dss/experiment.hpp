#pragma once

// Configuration-driven experiment runner: per-block candidate selection,
// waveform construction, fiber propagation, receiver DSP and CSV reporting.
// Deterministic given (config, seed): every random draw comes from a
// substream derived from the master seed, never from execution order.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dss/channel.hpp"
#include "dss/select.hpp"

namespace dss {

struct GridPlan {
  int n_wdm = 1;
  double wdm_spacing_ghz = 55.0;
  int n_subcarriers = 1;
  double subcarrier_baud_gbaud = 50.0;
  double subcarrier_spacing_ghz = 0.0;  // 0: (1+rolloff)*baud
  double rolloff = 0.1;
  int samples_per_symbol = 2;  // per subcarrier symbol on the simulation grid
};

struct LinkConfig {
  int n_spans = 1;
  double span_km = 205.0;
  double alpha_db_per_km = 0.2;
  double d_ps_nm_km = 17.0;
  double gamma_w_km = 1.3;
  double pmd_ps_sqrt_km = 0.0;
  double lambda_nm = 1550.0;
  double edfa_nf_db = 5.0;
  bool ase_on = false;
  double step_km = 0.1;
};

struct DmConfig {
  int l = 108;
  int n = 1;
  int nu = 0;
  double target_rate_bits_per_amp = 1.5;
  std::vector<int> alphabet = {1, 3, 5, 7};
  int e_max = 0;  // 0: smallest E_max reaching ceil(target_rate * l) bits
};

struct SelectorConfig {
  std::string kind = "none";  // none | edi | d_edi | ssfm_nli
  int w = 2;
  std::vector<int> schedule;      // d_edi span indices; empty: {0..n_spans-1}
  bool single_span_leff = true;   // single-span d_edi uses the L_eff variant
  double oracle_step_km = 1.0;
  std::optional<SubsampleSpec> subsample;
};

struct RxConfig {
  bool cpr_on = true;
  int cpr_window = 64;
};

struct SweepSpec {
  std::string var;  // power_dbm | w | nu | n | m_d | schedule | block_length |
                    // sequence_length | subsample_size
  std::vector<std::string> values;  // scalar or ';'-separated index lists
};

struct ExperimentConfig {
  std::string scenario = "single_span";  // single_span | multi_span
  GridPlan grid;
  LinkConfig link;
  DmConfig dm;
  SelectorConfig selector;
  RxConfig rx;
  double power_dbm = 9.0;
  double sign_info_ratio = 5.0 / 6.0;
  int n_4d_symbols = 16384;
  std::uint64_t seed = 1;
  std::optional<SweepSpec> sweep;
  bool include_timing = false;  // real wall times break byte-level reproducibility

  void validate() const;
};

struct ResultRow {
  std::string scenario;
  std::string sweep_var;
  std::string sweep_value;
  double power_dbm = 0.0;
  int l = 0, n_dms = 0, nu = 0;
  std::string selector;
  int w = 0;
  std::string schedule;
  std::uint64_t subsample = 0;  // 0 = exhaustive
  int n_blocks = 0;
  int n_4d_symbols = 0;
  int e_max = 0, k = 0;
  std::uint64_t seed = 0;
  double snr_elec_db = 0.0;
  double gmi_bits_per_4d = 0.0;
  double rate_loss_bits_per_4d = 0.0;  // 4 * Eq-(8) per-1D loss
  double air_bits_per_4d = 0.0;        // gmi - rate loss
  double mean_metric_of_winner = 0.0;
  double mean_eval_d_edi = 0.0;  // full-link w=2 D-EDI of the winners
  double wall_time_s = 0.0;
};

ExperimentConfig parse_config_json(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);
std::string resolved_config_json(const ExperimentConfig& cfg);

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

std::string csv_string(const std::vector<ResultRow>& rows,
                       const std::string& config_echo);
void emit_csv(const std::vector<ResultRow>& rows, const std::string& config_echo,
              const std::string& path);

}  // namespace dss
