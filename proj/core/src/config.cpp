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

#include "oqlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "oqlab/error.hpp"

namespace oqlab {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

struct Entry {
  std::string value;
  int line = 0;
};

[[noreturn]] void fail(const std::string& where, int line, const std::string& msg) {
  throw Error(ErrorCode::kSchema, where + ":" + std::to_string(line) + ": " + msg);
}

double parse_number(const std::string& text, const std::string& where, int line) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    fail(where, line, "expected a number, got '" + text + "'");
  }
  return v;
}

}  // namespace

RunConfig parse_config(std::istream& is, const std::string& source_name) {
  std::map<std::string, Entry> entries;
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(std::string_view(raw).substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) fail(source_name, line, "expected 'key = value'");
    std::string key = trim(std::string_view(text).substr(0, eq));
    std::string value = trim(std::string_view(text).substr(eq + 1));
    if (key.empty() || value.empty()) fail(source_name, line, "expected 'key = value'");
    if (entries.contains(key)) fail(source_name, line, "duplicate key '" + key + "'");
    entries[key] = {value, line};
  }
  if (is.bad()) throw Error(ErrorCode::kIo, "failed reading " + source_name);

  RunConfig cfg;
  if (auto it = entries.find("preset"); it != entries.end()) {
    if (it->second.value == "ideal") {
      cfg.detector = DetectorModel::ideal();
    } else if (it->second.value != "lab") {
      fail(source_name, it->second.line, "unknown preset '" + it->second.value + "'");
    }
    entries.erase(it);
  }

  using Setter = std::function<void(const Entry&)>;
  auto num = [&](double& target) -> Setter {
    return [&target, &source_name](const Entry& e) {
      target = parse_number(e.value, source_name, e.line);
    };
  };
  std::map<std::string, Setter> setters = {
      {"source",
       [&](const Entry& e) {
         try {
           cfg.source.kind = source_kind_from_string(e.value);
         } catch (const Error& err) {
           fail(source_name, e.line, err.what());
         }
       }},
      {"efficiency",
       [&](const Entry& e) {
         std::vector<double> values;
         std::string_view rest = e.value;
         while (true) {
           const auto comma = rest.find(',');
           values.push_back(parse_number(trim(rest.substr(0, comma)), source_name, e.line));
           if (comma == std::string_view::npos) break;
           rest.remove_prefix(comma + 1);
         }
         if (values.size() == 1) values.assign(kDetectorCount, values[0]);
         if (values.size() != kDetectorCount) {
           fail(source_name, e.line, "efficiency takes one or four values");
         }
         for (int d = 0; d < kDetectorCount; ++d) cfg.detector.efficiency[d] = values[d];
       }},
      {"dark_rate", num(cfg.detector.dark_rate)},
      {"dark_gate_ns", num(cfg.detector.dark_gate_ns)},
      {"pbs_reflect_leak", num(cfg.detector.pbs_reflect_leak)},
      {"pbs_transmit_leak", num(cfg.detector.pbs_transmit_leak)},
      {"waveplate_angle_error_deg", num(cfg.detector.waveplate_angle_error_deg)},
      {"coincidence_window_ns", num(cfg.detector.coincidence_window_ns)},
      {"timing_jitter_ns", num(cfg.detector.timing_jitter_ns)},
      {"mean_photons_per_pulse", num(cfg.source.mean_photons_per_pulse)},
      {"repetition_rate", num(cfg.source.repetition_rate)},
      {"pair_rate", num(cfg.source.pair_rate)},
      {"herald_efficiency", num(cfg.source.herald_efficiency)},
      {"excited_lifetime_ns", num(cfg.source.excited_lifetime_ns)},
      {"excitation_rate", num(cfg.source.excitation_rate)},
      {"collection_efficiency", num(cfg.source.collection_efficiency)},
      {"g2_bin_width_ns", num(cfg.g2.bin_width_ns)},
      {"g2_range_ns", num(cfg.g2.range_ns)},
      {"g2_zero_window_ns", num(cfg.g2.zero_window_ns)},
      {"duration_s", num(cfg.g2.duration_s)},
  };

  // Apply in file order so errors point at the first bad line.
  std::vector<std::pair<std::string, Entry>> ordered(entries.begin(), entries.end());
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& a, const auto& b) { return a.second.line < b.second.line; });
  for (const auto& [key, entry] : ordered) {
    auto it = setters.find(key);
    if (it == setters.end()) fail(source_name, entry.line, "unknown key '" + key + "'");
    it->second(entry);
  }

  try {
    cfg.source.validate();
    cfg.detector.validate();
  } catch (const Error& err) {
    throw Error(ErrorCode::kSchema, source_name + ": " + err.what());
  }
  const auto& g = cfg.g2;
  if (!(g.bin_width_ns > 0.0) || !(g.range_ns > g.bin_width_ns) || !(g.zero_window_ns > 0.0) ||
      g.zero_window_ns > g.range_ns || !(g.duration_s > 0.0)) {
    throw Error(ErrorCode::kSchema, source_name + ": inconsistent g2 histogram settings");
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config file " + path);
  return parse_config(in, path);
}

}  // namespace oqlab
