#include "harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "reference.hpp"

namespace mdhp::harness {

namespace {

using nlohmann::json;

constexpr std::uint64_t kStreamChannel = 0;
constexpr std::uint64_t kStreamMdHp = 1;
constexpr std::uint64_t kStreamQuantized = 2;

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot open for writing: " + path);
  out << content;
  if (!out) fail(ErrorCode::kIo, "write failed: " + path);
}

void write_matrix_csv(const RMat& m, const std::string& path) {
  std::string text;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) text += ',';
      text += fmt_double(m(r, c));
    }
    text += '\n';
  }
  write_text_file(path, text);
}

void write_complex_matrix_csv(const CMat& m, const std::string& base) {
  write_matrix_csv(m.real(), base + "_re.csv");
  write_matrix_csv(m.imag(), base + "_im.csv");
}

/// Dispatches [0, count) across a bounded pool; bodies must not throw.
void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 0) threads = 1;
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i; (i = next.fetch_add(1)) < count;) body(i);
  };
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (int t = 0; t < threads - 1; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

CMat make_channel(const ExperimentConfig& cfg, Rng& rng) {
  if (cfg.channel_family == ChannelFamily::kRayleigh)
    return channel::gen_rayleigh(cfg.nr, cfg.nt, rng);
  return channel::gen_mmwave(cfg.mmwave.to_params(cfg.nt, cfg.nr), rng);
}

/// Rate of the unconstrained SVD processors under the configured power
/// allocation; this is the per-trial upper bound for the hybrid schemes.
double unconstrained_rate(const RVec& sv, double gamma, int ns, bool waterfill) {
  if (!waterfill) return reference::rate_upper_bound(sv, gamma, ns);
  const auto pa = reference::waterfill(sv, gamma, ns);
  double rate = 0.0;
  for (int i = 0; i < ns; ++i)
    rate += std::log2(1.0 + gamma / ns * pa.gains(i) * pa.gains(i) * sv(i) * sv(i));
  return rate;
}

// --- json mapping ------------------------------------------------------

void check_known_keys(const json& j, std::initializer_list<const char*> known,
                      const std::string& section) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : known)
      if (item.key() == k) {
        ok = true;
        break;
      }
    if (!ok) fail(ErrorCode::kConfig, "unknown field '" + item.key() + "' in " + section);
  }
}

template <typename T>
void read_field(const json& j, const char* key, T& out, const std::string& section) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorCode::kConfig, "field '" + std::string(key) + "' in " + section + ": " + e.what());
  }
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "svd_unconstrained") return Scheme::kSvdUnconstrained;
  if (s == "md_hp") return Scheme::kMdHp;
  if (s == "md_hp_quantized") return Scheme::kMdHpQuantized;
  fail(ErrorCode::kConfig, "unknown scheme '" + s + "'");
}

}  // namespace

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::kSvdUnconstrained: return "svd_unconstrained";
    case Scheme::kMdHp: return "md_hp";
    case Scheme::kMdHpQuantized: return "md_hp_quantized";
  }
  fail(ErrorCode::kInternal, "bad scheme value");
}

std::string to_string(ChannelFamily f) {
  return f == ChannelFamily::kRayleigh ? "rayleigh" : "mmwave";
}

channel::MmWaveParams MmWaveConfig::to_params(int nt, int nr) const {
  channel::MmWaveParams p;
  p.clusters = clusters;
  p.paths_per_cluster = paths_per_cluster;
  p.tx_sector_min = tx_sector_deg_min * kDegToRad;
  p.tx_sector_max = tx_sector_deg_max * kDegToRad;
  p.rx_sector_min = rx_sector_deg_min * kDegToRad;
  p.rx_sector_max = rx_sector_deg_max * kDegToRad;
  p.tx_spread = tx_spread_deg * kDegToRad;
  p.rx_spread = rx_spread_deg * kDegToRad;
  p.tx_geometry = {nt, spacing_over_wavelength};
  p.rx_geometry = {nr, spacing_over_wavelength};
  return p;
}

void ExperimentConfig::validate() const {
  require(nt >= 1 && nr >= 1, ErrorCode::kConfig, "config: nt and nr must be >= 1");
  require(ns >= 1 && ns <= mt && mt <= nt, ErrorCode::kConfig,
          "config: need 1 <= ns <= mt <= nt");
  require(ns <= mr && mr <= nr, ErrorCode::kConfig, "config: need ns <= mr <= nr");
  require(trials >= 1, ErrorCode::kConfig, "config: trials must be >= 1");
  require(!snr_grid_db.empty(), ErrorCode::kConfig, "config: snr_grid_db must be non-empty");
  require(!schemes.empty(), ErrorCode::kConfig, "config: schemes must be non-empty");
  if (quant_bits)
    require(*quant_bits >= 1 && *quant_bits <= 52, ErrorCode::kConfig,
            "config: quant_bits must be in [1, 52]");
  for (Scheme s : schemes)
    if (s == Scheme::kMdHpQuantized && !quant_bits)
      fail(ErrorCode::kConfig, "config: scheme md_hp_quantized requires quant_bits");
  try {
    decomposition.validate();
    if (channel_family == ChannelFamily::kMmwave) channel::validate(mmwave.to_params(nt, nr));
  } catch (const Error& e) {
    fail(ErrorCode::kConfig, std::string("config: ") + e.what());
  }
}

ExperimentConfig default_convergence_config() {
  ExperimentConfig cfg;
  cfg.ns = 4;
  cfg.mt = 6;
  cfg.mr = 6;
  cfg.trials = 1;
  cfg.schemes = {Scheme::kMdHp};
  return cfg;
}

ExperimentConfig default_sweep_config() {
  ExperimentConfig cfg;
  cfg.quant_bits = 2;
  cfg.schemes = {Scheme::kSvdUnconstrained, Scheme::kMdHp, Scheme::kMdHpQuantized};
  return cfg;
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kConfig, std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::kConfig, "config: top level must be an object");
  check_known_keys(j,
                   {"channel_family", "nt", "nr", "ns", "mt", "mr", "snr_grid_db", "trials",
                    "seed", "decomposition", "mmwave", "quant_bits", "waterfill", "schemes"},
                   "config");

  ExperimentConfig cfg;
  if (j.contains("channel_family")) {
    const auto fam = j.at("channel_family").get<std::string>();
    if (fam == "rayleigh")
      cfg.channel_family = ChannelFamily::kRayleigh;
    else if (fam == "mmwave")
      cfg.channel_family = ChannelFamily::kMmwave;
    else
      fail(ErrorCode::kConfig, "config: channel_family must be 'rayleigh' or 'mmwave'");
  }
  read_field(j, "nt", cfg.nt, "config");
  read_field(j, "nr", cfg.nr, "config");
  read_field(j, "ns", cfg.ns, "config");
  read_field(j, "mt", cfg.mt, "config");
  read_field(j, "mr", cfg.mr, "config");
  read_field(j, "snr_grid_db", cfg.snr_grid_db, "config");
  read_field(j, "trials", cfg.trials, "config");
  read_field(j, "seed", cfg.seed, "config");
  read_field(j, "waterfill", cfg.waterfill, "config");
  if (j.contains("quant_bits") && !j.at("quant_bits").is_null())
    cfg.quant_bits = j.at("quant_bits").get<int>();

  if (j.contains("schemes")) {
    cfg.schemes.clear();
    for (const auto& s : j.at("schemes")) cfg.schemes.push_back(scheme_from_string(s.get<std::string>()));
  }

  if (j.contains("decomposition")) {
    const json& d = j.at("decomposition");
    check_known_keys(d,
                     {"convergence_tol", "initial_increment", "growth_factor", "shrink_factor",
                      "increment_min", "increment_max", "proximity_multiplier", "max_iterations",
                      "threshold_mode", "normalize_output"},
                     "decomposition");
    auto& s = cfg.decomposition;
    read_field(d, "convergence_tol", s.convergence_tol, "decomposition");
    read_field(d, "initial_increment", s.initial_increment, "decomposition");
    read_field(d, "growth_factor", s.growth_factor, "decomposition");
    read_field(d, "shrink_factor", s.shrink_factor, "decomposition");
    read_field(d, "increment_min", s.increment_min, "decomposition");
    read_field(d, "increment_max", s.increment_max, "decomposition");
    read_field(d, "proximity_multiplier", s.proximity_multiplier, "decomposition");
    read_field(d, "max_iterations", s.max_iterations, "decomposition");
    read_field(d, "normalize_output", s.normalize_output, "decomposition");
    if (d.contains("threshold_mode")) {
      const auto mode = d.at("threshold_mode").get<std::string>();
      if (mode == "constant")
        s.threshold_mode = decomposer::ThresholdMode::kConstant;
      else if (mode == "adaptive")
        s.threshold_mode = decomposer::ThresholdMode::kAdaptive;
      else
        fail(ErrorCode::kConfig, "decomposition: threshold_mode must be 'constant' or 'adaptive'");
    }
  }

  if (j.contains("mmwave")) {
    const json& m = j.at("mmwave");
    check_known_keys(m,
                     {"clusters", "paths_per_cluster", "tx_sector_deg", "rx_sector_deg",
                      "tx_spread_deg", "rx_spread_deg", "spacing_over_wavelength"},
                     "mmwave");
    auto& w = cfg.mmwave;
    read_field(m, "clusters", w.clusters, "mmwave");
    read_field(m, "paths_per_cluster", w.paths_per_cluster, "mmwave");
    read_field(m, "tx_spread_deg", w.tx_spread_deg, "mmwave");
    read_field(m, "rx_spread_deg", w.rx_spread_deg, "mmwave");
    read_field(m, "spacing_over_wavelength", w.spacing_over_wavelength, "mmwave");
    if (m.contains("tx_sector_deg")) {
      const auto v = m.at("tx_sector_deg").get<std::vector<double>>();
      require(v.size() == 2, ErrorCode::kConfig, "mmwave: tx_sector_deg must be [min, max]");
      w.tx_sector_deg_min = v[0];
      w.tx_sector_deg_max = v[1];
    }
    if (m.contains("rx_sector_deg")) {
      const auto v = m.at("rx_sector_deg").get<std::vector<double>>();
      require(v.size() == 2, ErrorCode::kConfig, "mmwave: rx_sector_deg must be [min, max]");
      w.rx_sector_deg_min = v[0];
      w.rx_sector_deg_max = v[1];
    }
  }

  cfg.validate();
  return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["channel_family"] = to_string(cfg.channel_family);
  j["nt"] = cfg.nt;
  j["nr"] = cfg.nr;
  j["ns"] = cfg.ns;
  j["mt"] = cfg.mt;
  j["mr"] = cfg.mr;
  j["snr_grid_db"] = cfg.snr_grid_db;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["waterfill"] = cfg.waterfill;
  if (cfg.quant_bits)
    j["quant_bits"] = *cfg.quant_bits;
  else
    j["quant_bits"] = nullptr;
  json schemes = json::array();
  for (Scheme s : cfg.schemes) schemes.push_back(to_string(s));
  j["schemes"] = schemes;

  const auto& s = cfg.decomposition;
  j["decomposition"] = {
      {"convergence_tol", s.convergence_tol},
      {"initial_increment", s.initial_increment},
      {"growth_factor", s.growth_factor},
      {"shrink_factor", s.shrink_factor},
      {"increment_min", s.increment_min},
      {"increment_max", s.increment_max},
      {"proximity_multiplier", s.proximity_multiplier},
      {"max_iterations", s.max_iterations},
      {"threshold_mode",
       s.threshold_mode == decomposer::ThresholdMode::kAdaptive ? "adaptive" : "constant"},
      {"normalize_output", s.normalize_output},
  };
  const auto& w = cfg.mmwave;
  j["mmwave"] = {
      {"clusters", w.clusters},
      {"paths_per_cluster", w.paths_per_cluster},
      {"tx_sector_deg", {w.tx_sector_deg_min, w.tx_sector_deg_max}},
      {"rx_sector_deg", {w.rx_sector_deg_min, w.rx_sector_deg_max}},
      {"tx_spread_deg", w.tx_spread_deg},
      {"rx_spread_deg", w.rx_spread_deg},
      {"spacing_over_wavelength", w.spacing_over_wavelength},
  };
  return j.dump(2) + "\n";
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open config: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

void save_config(const ExperimentConfig& cfg, const std::string& path) {
  write_text_file(path, config_to_json(cfg));
}

// --- sweep --------------------------------------------------------------

namespace {

struct SchemeOutcome {
  double rate = 0.0;
  double eps_precoder = 0.0;
  double eps_combiner = 0.0;
};

struct CellOutcome {
  bool failed = false;
  bool invariant_violation = false;
  std::string message;
  std::vector<SchemeOutcome> by_scheme;
};

CellOutcome compute_cell(const ExperimentConfig& cfg, int snr_index, int trial_index) {
  CellOutcome cell;
  cell.by_scheme.resize(cfg.schemes.size());
  const std::uint64_t cell_index =
      static_cast<std::uint64_t>(snr_index) * static_cast<std::uint64_t>(cfg.trials) + trial_index;
  const double gamma = std::pow(10.0, cfg.snr_grid_db[snr_index] / 10.0);

  Rng rng_channel(derive_stream(cfg.seed, cell_index, kStreamChannel));
  const CMat h = make_channel(cfg, rng_channel);
  const auto des = reference::optimal_unconstrained(h, cfg.ns);
  const double upper = unconstrained_rate(des.top_singular_values, gamma, cfg.ns, cfg.waterfill);

  for (std::size_t k = 0; k < cfg.schemes.size(); ++k) {
    auto& out = cell.by_scheme[k];
    if (cfg.schemes[k] == Scheme::kSvdUnconstrained) {
      out.rate = upper;
      continue;
    }
    evaluator::DesignOptions opt;
    opt.ns = cfg.ns;
    opt.mt = cfg.mt;
    opt.mr = cfg.mr;
    opt.gamma = gamma;
    opt.settings = cfg.decomposition;
    opt.waterfill = cfg.waterfill;
    std::uint64_t tag = kStreamMdHp;
    if (cfg.schemes[k] == Scheme::kMdHpQuantized) {
      opt.quant_bits = cfg.quant_bits;
      tag = kStreamQuantized;
    }
    Rng rng_scheme(derive_stream(cfg.seed, cell_index, tag));
    const auto [link, report] = evaluator::design_link(h, des, opt, rng_scheme);
    if (report.achieved > report.upper_bound + 1e-6) {
      cell.invariant_violation = true;
      cell.message = "achieved rate " + fmt_double(report.achieved) + " exceeds upper bound " +
                     fmt_double(report.upper_bound);
      return cell;
    }
    out.rate = report.achieved;
    out.eps_precoder = report.eps_precoder;
    out.eps_combiner = report.eps_combiner;
  }
  return cell;
}

}  // namespace

std::vector<ResultRecord> run_sweep(const ExperimentConfig& cfg, int threads) {
  cfg.validate();
  const int snr_count = static_cast<int>(cfg.snr_grid_db.size());
  const int total_cells = snr_count * cfg.trials;
  std::vector<CellOutcome> cells(total_cells);

  parallel_for(total_cells, threads, [&](int idx) {
    const int si = idx / cfg.trials;
    const int ti = idx % cfg.trials;
    try {
      cells[idx] = compute_cell(cfg, si, ti);
    } catch (const std::exception& e) {
      cells[idx].failed = true;
      cells[idx].message = e.what();
    }
  });

  int failed = 0;
  for (const auto& cell : cells) {
    if (cell.invariant_violation)
      fail(ErrorCode::kInternal, "sweep: rate invariant violated: " + cell.message);
    if (cell.failed) ++failed;
  }
  if (failed > 0 && static_cast<double>(failed) > 0.01 * total_cells) {
    std::string first;
    for (const auto& cell : cells)
      if (cell.failed) {
        first = cell.message;
        break;
      }
    fail(ErrorCode::kTooManyTrialFailures,
         "sweep: " + std::to_string(failed) + " of " + std::to_string(total_cells) +
             " trials failed; first error: " + first);
  }

  std::vector<ResultRecord> records;
  records.reserve(cfg.schemes.size() * snr_count);
  for (std::size_t k = 0; k < cfg.schemes.size(); ++k) {
    for (int si = 0; si < snr_count; ++si) {
      std::vector<const SchemeOutcome*> ok;
      ok.reserve(cfg.trials);
      for (int ti = 0; ti < cfg.trials; ++ti) {
        const auto& cell = cells[si * cfg.trials + ti];
        if (!cell.failed) ok.push_back(&cell.by_scheme[k]);
      }
      ResultRecord rec;
      rec.scheme = to_string(cfg.schemes[k]);
      rec.snr_db = cfg.snr_grid_db[si];
      rec.trials = static_cast<int>(ok.size());
      if (!ok.empty()) {
        double sum = 0.0, sum_ep = 0.0, sum_ec = 0.0;
        for (const auto* o : ok) {
          sum += o->rate;
          sum_ep += o->eps_precoder;
          sum_ec += o->eps_combiner;
        }
        rec.mean_rate = sum / rec.trials;
        rec.mean_eps_precoder = sum_ep / rec.trials;
        rec.mean_eps_combiner = sum_ec / rec.trials;
        if (rec.trials > 1) {
          double ss = 0.0;
          for (const auto* o : ok) {
            const double d = o->rate - rec.mean_rate;
            ss += d * d;
          }
          rec.rate_stderr = std::sqrt(ss / (static_cast<double>(rec.trials) * (rec.trials - 1)));
        }
      }
      records.push_back(std::move(rec));
    }
  }
  return records;
}

std::string records_to_csv(const std::vector<ResultRecord>& records) {
  std::string text = "scheme,snr_db,mean_rate,rate_stderr,eps_precoder,eps_combiner,trials\n";
  for (const auto& r : records) {
    text += r.scheme;
    text += ',';
    text += fmt_double(r.snr_db);
    text += ',';
    text += fmt_double(r.mean_rate);
    text += ',';
    text += fmt_double(r.rate_stderr);
    text += ',';
    text += fmt_double(r.mean_eps_precoder);
    text += ',';
    text += fmt_double(r.mean_eps_combiner);
    text += ',';
    text += std::to_string(r.trials);
    text += '\n';
  }
  return text;
}

void emit_csv(const std::vector<ResultRecord>& records, const std::string& path) {
  require(!records.empty(), ErrorCode::kInvalidArgument, "emit_csv: no records");
  write_text_file(path, records_to_csv(records));
}

// --- convergence ---------------------------------------------------------

ConvergenceReport run_convergence(const ExperimentConfig& cfg) {
  cfg.validate();  // trials is honored as a single realization below

  Rng rng_channel(derive_stream(cfg.seed, 0, kStreamChannel));
  const CMat h = make_channel(cfg, rng_channel);
  const auto des = reference::optimal_unconstrained(h, cfg.ns);
  const double mod_t = 1.0 / std::sqrt(static_cast<double>(cfg.nt));

  ConvergenceReport report;
  report.trace_row = 0;
  report.trace_col = std::min(4, cfg.mt - 1);  // same designated entry as the reference traces

  auto run_mode = [&](decomposer::ThresholdMode mode) {
    ConvergenceRun run;
    run.mode = mode;
    auto settings = cfg.decomposition;
    settings.threshold_mode = mode;
    settings.normalize_output = false;
    Rng rng(derive_stream(cfg.seed, 0, kStreamMdHp));
    auto observer = [&](int iter, const decomposer::PhaseMatrix& before,
                        const decomposer::PhaseMatrix& after) {
      const double pb = before.phases(report.trace_row, report.trace_col);
      const double pa = after.phases(report.trace_row, report.trace_col);
      const double delta = principal_angle(pa, pb);
      PhaseTracePoint pt;
      pt.iteration = iter;
      pt.exact = std::polar(1.0, pa);
      pt.linearized = (Complex(1.0, 0.0) + Complex(0.0, delta)) * std::polar(1.0, pb);
      run.phase_trace.push_back(pt);
    };
    run.trace = decomposer::decompose(des.precoder, cfg.mt, mod_t, settings, rng, observer).second;
    return run;
  };

  report.constant_run = run_mode(decomposer::ThresholdMode::kConstant);
  report.adaptive_run = run_mode(decomposer::ThresholdMode::kAdaptive);
  return report;
}

namespace {

std::string convergence_csv(const ConvergenceRun& run) {
  std::string text = "iteration,error,threshold\n";
  text += "0," + fmt_double(run.trace.error_history[0]) + ",\n";
  for (int k = 1; k < static_cast<int>(run.trace.error_history.size()); ++k) {
    text += std::to_string(k);
    text += ',';
    text += fmt_double(run.trace.error_history[k]);
    text += ',';
    text += fmt_double(run.trace.threshold_history[k - 1]);
    text += '\n';
  }
  return text;
}

std::string phase_trace_csv(const ConvergenceRun& run) {
  std::string text = "iteration,exact_re,exact_im,linearized_re,linearized_im\n";
  for (const auto& pt : run.phase_trace) {
    text += std::to_string(pt.iteration);
    text += ',';
    text += fmt_double(pt.exact.real());
    text += ',';
    text += fmt_double(pt.exact.imag());
    text += ',';
    text += fmt_double(pt.linearized.real());
    text += ',';
    text += fmt_double(pt.linearized.imag());
    text += '\n';
  }
  return text;
}

}  // namespace

void write_convergence_csv(const ConvergenceReport& report, const std::string& dir) {
  const std::filesystem::path base(dir);
  write_text_file((base / "convergence_constant.csv").string(),
                  convergence_csv(report.constant_run));
  write_text_file((base / "convergence_adaptive.csv").string(),
                  convergence_csv(report.adaptive_run));
  write_text_file((base / "phase_trace_constant.csv").string(),
                  phase_trace_csv(report.constant_run));
  write_text_file((base / "phase_trace_adaptive.csv").string(),
                  phase_trace_csv(report.adaptive_run));
}

// --- single --------------------------------------------------------------

void run_single(const ExperimentConfig& cfg, double snr_db, const std::string& dir) {
  cfg.validate();
  const double gamma = std::pow(10.0, snr_db / 10.0);

  Rng rng_channel(derive_stream(cfg.seed, 0, kStreamChannel));
  const CMat h = make_channel(cfg, rng_channel);
  const auto des = reference::optimal_unconstrained(h, cfg.ns);

  evaluator::DesignOptions opt;
  opt.ns = cfg.ns;
  opt.mt = cfg.mt;
  opt.mr = cfg.mr;
  opt.gamma = gamma;
  opt.settings = cfg.decomposition;
  opt.waterfill = cfg.waterfill;
  opt.quant_bits = cfg.quant_bits;
  Rng rng(derive_stream(cfg.seed, 0, cfg.quant_bits ? kStreamQuantized : kStreamMdHp));
  const auto [link, report] = evaluator::design_link(h, des, opt, rng);

  const std::filesystem::path base(dir);
  write_matrix_csv(link.precoder.rf.phases, (base / "precoder_rf_phases.csv").string());
  write_complex_matrix_csv(link.precoder.baseband, (base / "precoder_baseband").string());
  write_matrix_csv(link.combiner.rf.phases, (base / "combiner_rf_phases.csv").string());
  write_complex_matrix_csv(link.combiner.baseband, (base / "combiner_baseband").string());

  const CMat f_real = link.precoder.rf.realize() * link.precoder.baseband;
  const double mi = evaluator::mutual_information(h, f_real, gamma, cfg.ns);
  const double mi_approx = evaluator::mutual_information_approx(des.top_singular_values,
                                                                des.precoder, f_real, gamma, cfg.ns);

  std::string text = "key,value\n";
  auto kv = [&text](const std::string& key, const std::string& value) {
    text += key + "," + value + "\n";
  };
  kv("channel_family", to_string(cfg.channel_family));
  kv("nt", std::to_string(cfg.nt));
  kv("nr", std::to_string(cfg.nr));
  kv("ns", std::to_string(cfg.ns));
  kv("mt", std::to_string(cfg.mt));
  kv("mr", std::to_string(cfg.mr));
  kv("seed", std::to_string(cfg.seed));
  kv("quant_bits", cfg.quant_bits ? std::to_string(*cfg.quant_bits) : "none");
  kv("waterfill", cfg.waterfill ? "true" : "false");
  kv("snr_db", fmt_double(snr_db));
  kv("gamma", fmt_double(gamma));
  kv("achieved_rate", fmt_double(report.achieved));
  kv("upper_bound", fmt_double(report.upper_bound));
  kv("eps_precoder", fmt_double(report.eps_precoder));
  kv("eps_combiner", fmt_double(report.eps_combiner));
  kv("mutual_information", fmt_double(mi));
  kv("mutual_information_approx", fmt_double(mi_approx));
  write_text_file((base / "summary.csv").string(), text);
}

}  // namespace mdhp::harness
