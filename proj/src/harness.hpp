#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "channel.hpp"
#include "common.hpp"
#include "decomposer.hpp"
#include "evaluator.hpp"

namespace mdhp::harness {

enum class ChannelFamily { kRayleigh, kMmwave };
enum class Scheme { kSvdUnconstrained, kMdHp, kMdHpQuantized };

std::string to_string(Scheme s);
std::string to_string(ChannelFamily f);

/// mmWave section of the experiment config. Angles are degrees here; they
/// are converted to radians when the channel parameters are built.
struct MmWaveConfig {
  int clusters = 8;
  int paths_per_cluster = 10;
  double tx_sector_deg_min = -30.0;
  double tx_sector_deg_max = 30.0;
  double rx_sector_deg_min = -180.0;
  double rx_sector_deg_max = 180.0;
  double tx_spread_deg = 7.5;
  double rx_spread_deg = 7.5;
  double spacing_over_wavelength = 0.5;

  channel::MmWaveParams to_params(int nt, int nr) const;
  bool operator==(const MmWaveConfig&) const = default;
};

struct ExperimentConfig {
  ChannelFamily channel_family = ChannelFamily::kRayleigh;
  int nt = 64;
  int nr = 256;
  int ns = 8;
  int mt = 12;
  int mr = 12;
  std::vector<double> snr_grid_db = {-40, -35, -30, -25, -20, -15, -10, -5, 0};
  int trials = 100;
  std::uint64_t seed = 1;
  decomposer::DecompositionSettings decomposition;
  MmWaveConfig mmwave;
  std::optional<int> quant_bits;
  bool waterfill = false;
  std::vector<Scheme> schemes = {Scheme::kSvdUnconstrained, Scheme::kMdHp};

  void validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

/// Fig. 3 style single-channel convergence study (256x64 Rayleigh, 4 streams
/// through 6 RF chains).
ExperimentConfig default_convergence_config();

/// Fig. 4 style SNR sweep (256x64 Rayleigh, 8 streams through 12 RF chains,
/// all three schemes, 2-bit quantization).
ExperimentConfig default_sweep_config();

ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::string& path);
void save_config(const ExperimentConfig& cfg, const std::string& path);

struct ResultRecord {
  std::string scheme;
  double snr_db = 0.0;
  double mean_rate = 0.0;
  double rate_stderr = 0.0;
  double mean_eps_precoder = 0.0;
  double mean_eps_combiner = 0.0;
  int trials = 0;
};

/// Monte-Carlo SNR sweep. Each (SNR, trial) cell owns derived random streams,
/// so the output is byte-deterministic for a fixed seed regardless of the
/// worker count. Per-trial errors are excluded up to 1% of the total; beyond
/// that the sweep aborts. A trial whose achieved rate exceeds its upper bound
/// by more than 1e-6 aborts immediately.
std::vector<ResultRecord> run_sweep(const ExperimentConfig& cfg, int threads = 0);

/// Sweep-record CSV: header
/// scheme,snr_db,mean_rate,rate_stderr,eps_precoder,eps_combiner,trials
/// with full double precision and LF line endings.
void emit_csv(const std::vector<ResultRecord>& records, const std::string& path);
std::string records_to_csv(const std::vector<ResultRecord>& records);

struct PhaseTracePoint {
  int iteration = 0;
  Complex exact;       // e^{j(phi + delta)}
  Complex linearized;  // (1 + j*delta) e^{j*phi}
};

struct ConvergenceRun {
  decomposer::ThresholdMode mode;
  decomposer::DecompositionTrace trace;
  std::vector<PhaseTracePoint> phase_trace;
};

struct ConvergenceReport {
  ConvergenceRun constant_run;
  ConvergenceRun adaptive_run;
  int trace_row = 0;
  int trace_col = 0;
};

/// Runs the precoder decomposition for one channel realization under both
/// threshold schedules (same seed, same initial point) and records the error
/// and threshold histories plus the trajectory of one designated RF entry.
ConvergenceReport run_convergence(const ExperimentConfig& cfg);

/// Writes convergence_{constant,adaptive}.csv and
/// phase_trace_{constant,adaptive}.csv into the given directory.
void write_convergence_csv(const ConvergenceReport& report, const std::string& dir);

/// One channel at one SNR: writes the hybrid factors, traces and a rate
/// summary into the given directory.
void run_single(const ExperimentConfig& cfg, double snr_db, const std::string& dir);

}  // namespace mdhp::harness
