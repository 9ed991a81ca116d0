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

#include "oqlab/scan.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "oqlab/error.hpp"
#include "oqlab/parallel.hpp"
#include "oqlab/qcore.hpp"

namespace oqlab {
namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::kInvalidArgument, msg); }

// Inclusive grid from lo to hi; the last point is hi when the step divides
// the range (up to rounding), so integer-degree grids hit their endpoints.
std::vector<double> grid(double lo, double hi, double step) {
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + static_cast<double>(i) * step;
  return out;
}

ResultRow exact_row(const QubitState& state) {
  ResultRow row;
  row.bloch = bloch_vector(state);
  row.quasi = oq_distribution(context_table(state));
  return row;
}

std::vector<ResultRow> pure_grid(const ScanSpec& spec, std::size_t threads) {
  const auto thetas = grid(spec.theta_min_deg, spec.theta_max_deg, spec.theta_step_deg);
  const auto phis = grid(spec.phi_min_deg, spec.phi_max_deg, spec.phi_step_deg);
  std::vector<ResultRow> rows(thetas.size() * phis.size());
  parallel_for(
      rows.size(),
      [&](std::size_t i) {
        const double theta = thetas[i / phis.size()];
        const double phi = phis[i % phis.size()];
        ResultRow row = exact_row(make_pure_state(radians(theta), radians(phi)));
        row.theta_deg = theta;
        row.phi_deg = phi;
        rows[i] = row;
      },
      threads);
  return rows;
}

std::vector<ResultRow> bloch_disk(const ScanSpec& spec, std::size_t threads) {
  const auto thetas = grid(spec.theta1_min_deg, spec.theta1_max_deg, spec.theta1_step_deg);
  const std::size_t n_alpha = 2 * static_cast<std::size_t>(spec.alpha_divisions) + 1;
  std::vector<ResultRow> rows(thetas.size() * n_alpha);
  parallel_for(
      rows.size(),
      [&](std::size_t i) {
        const double theta1 = thetas[i / n_alpha];
        const double theta2 = theta1 + 180.0;
        const auto k = static_cast<double>(i % n_alpha);
        const double alpha = -1.0 + k / spec.alpha_divisions;
        ResultRow row = exact_row(make_mixed_state(radians(theta1), radians(theta2), alpha));
        row.theta1_deg = theta1;
        row.theta2_deg = theta2;
        row.alpha = alpha;
        rows[i] = row;
      },
      threads);
  return rows;
}

std::vector<ResultRow> weak_field(const ScanSpec& spec, std::size_t threads) {
  const auto thetas = grid(spec.theta_min_deg, spec.theta_max_deg, spec.theta_step_deg);
  const std::size_t n_mean = spec.mean_photons.size();
  std::vector<ResultRow> rows(thetas.size() * n_mean * 2);
  parallel_for(
      thetas.size() * n_mean,
      [&](std::size_t i) {
        const double theta = thetas[i / n_mean];
        const double phi = spec.phi_min_deg;
        SourceModel source = spec.source;
        source.mean_photons_per_pulse = spec.mean_photons[i % n_mean];
        const std::uint64_t seed = derive_seed(spec.seed, i);

        ExperimentRecord rec;
        rec.metadata.theta_deg = theta;
        rec.metadata.phi_deg = phi;
        rec.metadata.source = to_string(source.kind);
        int k = 0;
        for (const auto& setup : {kSequential, kDaOnly}) {
          rec.add(weakfield_run(radians(theta), radians(phi), source, setup, spec.pulses,
                                spec.detector, derive_seed(seed, k++)));
        }
        const auto dark = measure_dark_counts(source, spec.pulses, spec.detector, derive_seed(seed, k));

        for (int corrected = 0; corrected < 2; ++corrected) {
          const auto report = analyze(corrected ? dark_count_correction(rec, dark) : rec);
          ResultRow row;
          row.theta_deg = theta;
          row.phi_deg = phi;
          row.mean_photons = source.mean_photons_per_pulse;
          row.dark_corrected = corrected == 1;
          row.bloch = bloch_vector(make_pure_state(radians(theta), radians(phi)));
          row.quasi = report.quasi;
          row.negativity_statistical = report.negativity_statistical;
          row.negativity_systematic = report.negativity_systematic;
          rows[2 * i + corrected] = row;
        }
      },
      threads);
  return rows;
}

constexpr const char* kColumns[] = {
    "theta_deg", "phi_deg",   "theta1_deg", "theta2_deg", "alpha",     "mean_photons",
    "dark_corrected", "x",    "y",          "z",          "w00",       "w01",
    "w10",       "w11",       "negativity", "nsit_dev0",  "nsit_dev1", "aot_dev0",
    "aot_dev1",  "negativity_stat", "negativity_sys"};
constexpr std::size_t kColumnCount = std::size(kColumns);

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

std::optional<double> parse_field(std::string_view s, const std::string& where, int line) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kSchema,
                where + ":" + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

const char* to_string(ScanKind kind) {
  switch (kind) {
    case ScanKind::kPureGrid: return "pure";
    case ScanKind::kBlochDisk: return "disk";
    case ScanKind::kWeakField: return "weak";
  }
  return "?";
}

ScanKind scan_kind_from_string(const std::string& name) {
  if (name == "pure") return ScanKind::kPureGrid;
  if (name == "disk") return ScanKind::kBlochDisk;
  if (name == "weak") return ScanKind::kWeakField;
  invalid("unknown scan kind '" + name + "' (expected pure, disk or weak)");
}

void ScanSpec::validate() const {
  auto range = [](double lo, double hi, double step, const char* what) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(step > 0.0) || hi < lo) {
      invalid(std::string(what) + " range must be finite and nonempty with a positive step");
    }
  };
  switch (kind) {
    case ScanKind::kPureGrid:
      range(theta_min_deg, theta_max_deg, theta_step_deg, "theta");
      range(phi_min_deg, phi_max_deg, phi_step_deg, "phi");
      break;
    case ScanKind::kBlochDisk:
      range(theta1_min_deg, theta1_max_deg, theta1_step_deg, "theta1");
      if (alpha_divisions < 1) invalid("alpha_divisions must be positive");
      break;
    case ScanKind::kWeakField:
      range(theta_min_deg, theta_max_deg, theta_step_deg, "theta");
      if (!std::isfinite(phi_min_deg)) invalid("phi must be finite");
      if (mean_photons.empty()) invalid("weak-field scan needs at least one mean photon number");
      for (double m : mean_photons) {
        if (!(m > 0.0) || !std::isfinite(m)) invalid("mean photon numbers must be positive");
      }
      if (pulses == 0) invalid("weak-field scan needs a positive pulse count");
      if (source.kind != SourceKind::kWeakCoherent) invalid("weak-field scan needs a weak source");
      source.validate();
      detector.validate();
      break;
  }
}

std::vector<ResultRow> run_scan(const ScanSpec& spec, std::size_t threads) {
  spec.validate();
  switch (spec.kind) {
    case ScanKind::kPureGrid: return pure_grid(spec, threads);
    case ScanKind::kBlochDisk: return bloch_disk(spec, threads);
    case ScanKind::kWeakField: return weak_field(spec, threads);
  }
  return {};
}

void write_scan_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << "# schema_version: " << kScanSchemaVersion << '\n';
  for (std::size_t c = 0; c < kColumnCount; ++c) os << (c ? "," : "") << kColumns[c];
  os << '\n';
  for (const auto& r : rows) {
    const auto& q = r.quasi;
    const std::string fields[] = {
        fmt(r.theta_deg), fmt(r.phi_deg), fmt(r.theta1_deg), fmt(r.theta2_deg), fmt(r.alpha),
        fmt(r.mean_photons),
        r.dark_corrected ? std::string(*r.dark_corrected ? "1" : "0") : std::string(),
        fmt(r.bloch.x), fmt(r.bloch.y), fmt(r.bloch.z), fmt(q.w[0][0]), fmt(q.w[0][1]),
        fmt(q.w[1][0]), fmt(q.w[1][1]), fmt(q.negativity), fmt(q.nsit_dev[0]),
        fmt(q.nsit_dev[1]), fmt(q.aot_dev[0]), fmt(q.aot_dev[1]),
        fmt(r.negativity_statistical), fmt(r.negativity_systematic)};
    for (std::size_t c = 0; c < kColumnCount; ++c) os << (c ? "," : "") << fields[c];
    os << '\n';
  }
}

void write_scan_file(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path + " for writing");
  write_scan_csv(out, rows);
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path);
}

std::vector<ResultRow> read_scan_csv(std::istream& is, const std::string& source) {
  std::vector<ResultRow> rows;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string_view> f;
    std::string_view rest = line;
    while (true) {
      const auto comma = rest.find(',');
      f.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (f.size() != kColumnCount) {
      throw Error(ErrorCode::kSchema, source + ":" + std::to_string(line_no) + ": expected " +
                                          std::to_string(kColumnCount) + " fields");
    }
    if (!have_header) {
      for (std::size_t c = 0; c < kColumnCount; ++c) {
        if (f[c] != kColumns[c]) {
          throw Error(ErrorCode::kSchema, source + ":" + std::to_string(line_no) +
                                              ": unexpected header column '" + std::string(f[c]) + "'");
        }
      }
      have_header = true;
      continue;
    }
    auto num = [&](std::size_t c) { return parse_field(f[c], source, line_no); };
    auto req = [&](std::size_t c) {
      auto v = num(c);
      if (!v) {
        throw Error(ErrorCode::kSchema,
                    source + ":" + std::to_string(line_no) + ": missing " + kColumns[c]);
      }
      return *v;
    };
    ResultRow r;
    r.theta_deg = num(0);
    r.phi_deg = num(1);
    r.theta1_deg = num(2);
    r.theta2_deg = num(3);
    r.alpha = num(4);
    r.mean_photons = num(5);
    if (auto dc = num(6)) r.dark_corrected = *dc != 0.0;
    r.bloch = {req(7), req(8), req(9)};
    r.quasi.w = {{{req(10), req(11)}, {req(12), req(13)}}};
    r.quasi.negativity = req(14);
    r.quasi.nsit_dev = {req(15), req(16)};
    r.quasi.aot_dev = {req(17), req(18)};
    r.negativity_statistical = num(19);
    r.negativity_systematic = num(20);
    rows.push_back(r);
  }
  if (!have_header) throw Error(ErrorCode::kSchema, source + ": empty scan file");
  return rows;
}

}  // namespace oqlab
