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

// Flat key = value run configuration. Blank lines and '#' comments are
// ignored, keys are unique, and unknown keys are rejected with the offending
// line number. `preset = ideal` starts from perfect detectors regardless of
// where it appears; all other keys default to the lab values in
// DetectorModel and SourceModel.
//
//   source = spdc | emitter | weak
//   efficiency = 1, 1, 1, 1        (D00, D01, D10, D11)
//   dark_rate, dark_gate_ns, pbs_reflect_leak, pbs_transmit_leak,
//   waveplate_angle_error_deg, coincidence_window_ns, timing_jitter_ns
//   mean_photons_per_pulse, repetition_rate, pair_rate, herald_efficiency,
//   excited_lifetime_ns, excitation_rate, collection_efficiency
//   g2_bin_width_ns, g2_range_ns, g2_zero_window_ns, duration_s

#pragma once

#include <istream>
#include <string>

#include "oqlab/photonsim.hpp"

namespace oqlab {

struct G2Settings {
  double bin_width_ns = 0.5;
  double range_ns = 200.0;
  double zero_window_ns = 1.0;  // g2(0) averages bins within +-window/2
  double duration_s = 1.0;
};

struct RunConfig {
  SourceModel source;
  DetectorModel detector;
  G2Settings g2;
};

RunConfig parse_config(std::istream& is, const std::string& source_name);
RunConfig load_config_file(const std::string& path);

}  // namespace oqlab
