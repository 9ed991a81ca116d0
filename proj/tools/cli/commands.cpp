// Copyright 2026 The oqlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>

#include "oqlab/analysis.hpp"
#include "oqlab/config.hpp"
#include "oqlab/correlation.hpp"
#include "oqlab/count_io.hpp"
#include "oqlab/error.hpp"
#include "oqlab/photonsim.hpp"
#include "oqlab/qcore.hpp"
#include "oqlab/scan.hpp"

namespace oqlab::cli {
namespace {

namespace fs = std::filesystem;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

template <typename T>
std::optional<T> parse_as(std::string_view s) {
  T v{};
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// "a,b,c,d" or a count-table file holding a single table.
template <typename T>
std::array<T, kDetectorCount> four_values_or_table(const std::string& arg, const char* what,
                                                   const std::function<std::array<T, kDetectorCount>(
                                                       const CountTable&)>& from_table) {
  const auto parts = split(arg, ',');
  if (parts.size() == kDetectorCount) {
    std::array<T, kDetectorCount> v{};
    bool ok = true;
    for (int d = 0; d < kDetectorCount; ++d) {
      auto p = parse_as<T>(parts[d]);
      ok = ok && p.has_value();
      if (p) v[d] = *p;
    }
    if (ok) return v;
  }
  if (!fs::exists(arg)) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " takes four comma-separated values or a count-table file");
  }
  const auto tables = read_count_tables_file(arg);
  if (tables.size() != 1) {
    throw Error(ErrorCode::kSchema, arg + ": expected exactly one count table for " + what);
  }
  return from_table(tables.front());
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  f << text;
  f.flush();
  if (!f) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

std::string setup_tag(const MeasurementContext& s) {
  return std::string(s.n1 ? "1" : "0") + (s.n2 ? "1" : "0");
}

// ---------------------------------------------------------------------------

struct PredictArgs {
  double theta_deg = 0.0;
  double phi_deg = 0.0;
};

int cmd_predict(const PredictArgs& a, std::ostream& out) {
  if (!std::isfinite(a.theta_deg) || !std::isfinite(a.phi_deg)) {
    throw Error(ErrorCode::kInvalidArgument, "angles must be finite");
  }
  AnalysisReport report = predict(make_pure_state(radians(a.theta_deg), radians(a.phi_deg)));
  report.metadata.theta_deg = a.theta_deg;
  report.metadata.phi_deg = a.phi_deg;
  report.metadata.source = "exact";
  out << report_to_json(report);
  return kExitOk;
}

struct ScanArgs {
  std::string kind = "pure";
  std::string out_path;
  std::optional<double> theta_min, theta_max, theta_step;
  std::optional<double> phi_min, phi_max, phi_step;
  std::optional<double> theta1_step;
  std::optional<int> alpha_divisions;
  std::string means;
  std::optional<std::uint64_t> pulses;
  std::uint64_t seed = 1;
  std::string config;
};

int cmd_scan(const ScanArgs& a, std::ostream& out) {
  ScanSpec spec;
  spec.kind = scan_kind_from_string(a.kind);
  if (spec.kind == ScanKind::kWeakField) {
    spec.theta_step_deg = 5.0;
    spec.phi_min_deg = 0.0;
  }
  if (a.theta_min) spec.theta_min_deg = *a.theta_min;
  if (a.theta_max) spec.theta_max_deg = *a.theta_max;
  if (a.theta_step) spec.theta_step_deg = *a.theta_step;
  if (a.phi_min) spec.phi_min_deg = *a.phi_min;
  if (a.phi_max) spec.phi_max_deg = *a.phi_max;
  if (a.phi_step) spec.phi_step_deg = *a.phi_step;
  if (a.theta1_step) spec.theta1_step_deg = *a.theta1_step;
  if (a.alpha_divisions) spec.alpha_divisions = *a.alpha_divisions;
  if (a.pulses) spec.pulses = *a.pulses;
  spec.seed = a.seed;
  if (!a.config.empty()) {
    const RunConfig cfg = load_config_file(a.config);
    spec.detector = cfg.detector;
    spec.source = cfg.source;
    spec.source.kind = SourceKind::kWeakCoherent;
  }
  if (!a.means.empty()) {
    spec.mean_photons.clear();
    for (const auto& m : split(a.means, ',')) {
      auto v = parse_as<double>(m);
      if (!v) throw Error(ErrorCode::kInvalidArgument, "bad mean photon number '" + m + "'");
      spec.mean_photons.push_back(*v);
    }
  }

  const auto rows = run_scan(spec);
  write_scan_file(a.out_path, rows);

  const ResultRow* best = nullptr;
  for (const auto& r : rows) {
    if (!best || r.quasi.negativity > best->quasi.negativity) best = &r;
  }
  out << "rows: " << rows.size() << "\n";
  if (best) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", best->quasi.negativity);
    out << "max negativity: " << buf;
    if (best->theta_deg) out << " at theta=" << *best->theta_deg << " phi=" << *best->phi_deg;
    if (best->theta1_deg) out << " at theta1=" << *best->theta1_deg << " alpha=" << *best->alpha;
    if (best->mean_photons) {
      out << " mean=" << *best->mean_photons
          << (*best->dark_corrected ? " (dark corrected)" : " (uncorrected)");
    }
    out << "\n";
  }
  out << "wrote " << a.out_path << "\n";
  return kExitOk;
}

struct SimulateArgs {
  double theta_deg = 45.0;
  double phi_deg = 0.0;
  std::uint64_t photons = 10'000;
  std::string config;
  std::string source;
  std::optional<double> mean;
  std::uint64_t pulses = 1'000'000;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  if (!std::isfinite(a.theta_deg) || !std::isfinite(a.phi_deg)) {
    throw Error(ErrorCode::kInvalidArgument, "angles must be finite");
  }
  RunConfig cfg = a.config.empty() ? RunConfig{} : load_config_file(a.config);
  if (!a.source.empty()) cfg.source.kind = source_kind_from_string(a.source);
  if (a.mean) cfg.source.mean_photons_per_pulse = *a.mean;
  const bool weak = cfg.source.kind == SourceKind::kWeakCoherent;
  const double theta = radians(a.theta_deg);
  const double phi = radians(a.phi_deg);

  ExperimentRecord rec;
  rec.metadata.theta_deg = a.theta_deg;
  rec.metadata.phi_deg = a.phi_deg;
  rec.metadata.seed = a.seed;
  rec.metadata.source = to_string(cfg.source.kind);

  std::vector<CountTable> tables;
  std::optional<std::array<std::uint64_t, kDetectorCount>> dark;
  const std::array<MeasurementContext, 3> setups{kSequential, kDaOnly, kHvOnly};
  if (weak) {
    if (a.pulses == 0) throw Error(ErrorCode::kInvalidArgument, "--pulses must be positive");
    for (std::size_t k = 0; k < setups.size(); ++k) {
      tables.push_back(weakfield_run(theta, phi, cfg.source, setups[k], a.pulses, cfg.detector,
                                     derive_seed(a.seed, k)));
    }
    dark = measure_dark_counts(cfg.source, a.pulses, cfg.detector, derive_seed(a.seed, 3));
  } else {
    if (a.photons == 0) throw Error(ErrorCode::kInvalidArgument, "--photons must be positive");
    // One preparation (and one misalignment draw) shared by all setups.
    std::mt19937_64 rng(derive_seed(a.seed, 100));
    const QubitState state = apply_preparation_error(make_pure_state(theta, phi),
                                                      draw_waveplate_errors(cfg.detector, rng));
    DetectorModel det = cfg.detector;
    det.waveplate_angle_error_deg = 0.0;
    for (std::size_t k = 0; k < setups.size(); ++k) {
      tables.push_back(simulate_counts(state, setups[k], a.photons, det, derive_seed(a.seed, k)));
    }
  }
  for (const auto& t : tables) rec.add(t);

  const fs::path dir(a.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
  for (const auto& t : tables) {
    write_count_tables_file((dir / ("counts_" + setup_tag(t.setup) + ".csv")).string(),
                            std::span<const CountTable>(&t, 1));
  }
  if (dark) {
    const CountTable dark_table{kSequential, *dark};
    write_count_tables_file((dir / "dark_counts.csv").string(),
                            std::span<const CountTable>(&dark_table, 1));
  }

  const std::string json = report_to_json(analyze(rec));
  write_text_file(dir / "report.json", json);
  out << json;
  return kExitOk;
}

struct G2Args {
  std::string config;
  std::string source;
  std::optional<double> duration_s;
  std::uint64_t seed = 1;
  std::string out_path;
};

int cmd_g2(const G2Args& a, std::ostream& out) {
  RunConfig cfg = a.config.empty() ? RunConfig{} : load_config_file(a.config);
  if (!a.source.empty()) cfg.source.kind = source_kind_from_string(a.source);
  const double duration = a.duration_s.value_or(cfg.g2.duration_s);
  if (!(duration > 0.0)) throw Error(ErrorCode::kInvalidArgument, "--duration must be positive");

  const auto streams = generate_click_streams(cfg.source, duration, cfg.detector, a.seed);
  const auto h = start_stop_histogram(streams.start, streams.stop, cfg.g2.bin_width_ns,
                                      cfg.g2.range_ns);
  if (!a.out_path.empty()) {
    std::ostringstream csv;
    write_g2_csv(csv, h);
    write_text_file(a.out_path, csv.str());
  }
  char buf[128];
  out << "source: " << to_string(cfg.source.kind) << "\n";
  out << "starts: " << streams.start.size() << "  stops: " << streams.stop.size() << "\n";
  if (h.empty_input || h.unnormalized) {
    out << "g2(0): undefined (no usable coincidences)\n";
    return kExitData;
  }
  std::snprintf(buf, sizeof buf, "g2(0): %.6f  (|tau| <= %.3g ns)\n",
                g2_zero(h, cfg.g2.zero_window_ns), cfg.g2.zero_window_ns / 2);
  out << buf;
  return kExitOk;
}

struct AnalyzeArgs {
  std::vector<std::string> files;
  std::string dark_counts;
  std::string calibration;
  std::string mode = "lab";
  std::optional<double> theta_deg;
  std::optional<double> phi_deg;
  std::string out_path;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
  ExperimentRecord rec;
  rec.metadata.theta_deg = a.theta_deg;
  rec.metadata.phi_deg = a.phi_deg;
  rec.metadata.source = "counts";
  for (const auto& file : a.files) {
    for (const auto& t : read_count_tables_file(file)) {
      if (rec.tables.contains(t.setup)) {
        throw Error(ErrorCode::kSchema,
                    file + ": setup " + to_string(t.setup) + " given more than once");
      }
      rec.add(t);
    }
  }
  if (!a.calibration.empty()) {
    rec.calibration = four_values_or_table<double>(a.calibration, "--calibration",
                                                   calibration_from_reference);
  }
  if (!a.dark_counts.empty()) {
    const auto dark = four_values_or_table<std::uint64_t>(
        a.dark_counts, "--dark-counts", [](const CountTable& t) { return t.counts; });
    rec = dark_count_correction(rec, dark);
  }
  AnalysisOptions opts;
  if (a.mode == "strict") {
    opts.mode = EstimationMode::kStrict;
  } else if (a.mode != "lab") {
    throw Error(ErrorCode::kInvalidArgument, "--mode must be lab or strict");
  }
  const std::string json = report_to_json(analyze(rec, opts));
  if (!a.out_path.empty()) write_text_file(a.out_path, json);
  out << json;
  return kExitOk;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return kExitUsage;
    case ErrorCode::kIo: return kExitIo;
    default: return kExitData;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Operational quasiprobability of sequential polarization measurements", "oqlab"};
  app.require_subcommand(1);

  PredictArgs pa;
  auto* predict_cmd = app.add_subcommand("predict", "Exact W and negativity of a pure state");
  predict_cmd->add_option("--theta", pa.theta_deg, "Polar angle theta (deg)")->required();
  predict_cmd->add_option("--phi", pa.phi_deg, "Relative phase phi (deg)")->required();

  ScanArgs sa;
  auto* scan_cmd = app.add_subcommand("scan", "Negativity over a grid of states (CSV)");
  scan_cmd->add_option("--kind", sa.kind, "pure | disk | weak")->capture_default_str();
  scan_cmd->add_option("--out", sa.out_path, "Output CSV")->required();
  scan_cmd->add_option("--theta-min", sa.theta_min, "deg");
  scan_cmd->add_option("--theta-max", sa.theta_max, "deg");
  scan_cmd->add_option("--theta-step", sa.theta_step, "deg");
  scan_cmd->add_option("--phi-min", sa.phi_min, "deg (weak: the fixed phi)");
  scan_cmd->add_option("--phi-max", sa.phi_max, "deg");
  scan_cmd->add_option("--phi-step", sa.phi_step, "deg");
  scan_cmd->add_option("--theta1-step", sa.theta1_step, "Bloch disk: theta1 step (deg)");
  scan_cmd->add_option("--alpha-divisions", sa.alpha_divisions, "Bloch disk: 1/alpha step");
  scan_cmd->add_option("--means", sa.means, "Weak field: comma-separated mean photon numbers");
  scan_cmd->add_option("--pulses", sa.pulses, "Weak field: pulses per setup");
  scan_cmd->add_option("--seed", sa.seed, "Weak field: master seed")->capture_default_str();
  scan_cmd->add_option("--config", sa.config, "Weak field: detector/source config");

  SimulateArgs ma;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo count tables and their analysis");
  sim_cmd->add_option("--theta", ma.theta_deg, "deg")->capture_default_str();
  sim_cmd->add_option("--phi", ma.phi_deg, "deg")->capture_default_str();
  sim_cmd->add_option("--photons", ma.photons, "Photons per setup")->capture_default_str();
  sim_cmd->add_option("--config", ma.config, "Detector/source config file");
  sim_cmd->add_option("--source", ma.source, "Override the source kind (weak = post-selected pulses)");
  sim_cmd->add_option("--mean", ma.mean, "Weak field: mean photons per pulse");
  sim_cmd->add_option("--pulses", ma.pulses, "Weak field: pulses per setup")->capture_default_str();
  sim_cmd->add_option("--seed", ma.seed, "Master seed")->capture_default_str();
  sim_cmd->add_option("--out-dir", ma.out_dir, "Output directory")->capture_default_str();

  G2Args ga;
  auto* g2_cmd = app.add_subcommand("g2", "Start-stop g2(tau) histogram of a simulated source");
  g2_cmd->add_option("--config", ga.config, "Source/detector config file");
  g2_cmd->add_option("--source", ga.source, "Override the source kind");
  g2_cmd->add_option("--duration", ga.duration_s, "Acquisition time (s)");
  g2_cmd->add_option("--seed", ga.seed, "Seed")->capture_default_str();
  g2_cmd->add_option("--out", ga.out_path, "Histogram CSV");

  AnalyzeArgs aa;
  auto* an_cmd = app.add_subcommand("analyze", "W, negativity and error bars from count CSVs");
  an_cmd->add_option("files", aa.files, "Count-table CSV files")->required();
  an_cmd->add_option("--dark-counts", aa.dark_counts, "d00,d01,d10,d11 or a count-table file");
  an_cmd->add_option("--calibration", aa.calibration,
                     "Per-detector factors f00,f01,f10,f11 or an equal-flux reference table");
  an_cmd->add_option("--mode", aa.mode, "lab | strict")->capture_default_str();
  an_cmd->add_option("--theta", aa.theta_deg, "Recorded in the report (deg)");
  an_cmd->add_option("--phi", aa.phi_deg, "Recorded in the report (deg)");
  an_cmd->add_option("--out", aa.out_path, "Also write the JSON report here");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*predict_cmd) return cmd_predict(pa, out);
    if (*scan_cmd) return cmd_scan(sa, out);
    if (*sim_cmd) return cmd_simulate(ma, out);
    if (*g2_cmd) return cmd_g2(ga, out);
    if (*an_cmd) return cmd_analyze(aa, out);
  } catch (const Error& e) {
    err << "oqlab: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "oqlab: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace oqlab::cli
