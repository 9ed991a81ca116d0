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

// Parameter scans over the state space. Exact scans (pure grid, Bloch
// disk) are deterministic; the weak-field scan simulates post-selected
// pulse trains with per-point seeds derived from the master seed, so its
// output does not depend on the thread count either.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "oqlab/analysis.hpp"
#include "oqlab/photonsim.hpp"

namespace oqlab {

enum class ScanKind { kPureGrid, kBlochDisk, kWeakField };

const char* to_string(ScanKind kind);
ScanKind scan_kind_from_string(const std::string& name);

struct ScanSpec {
  ScanKind kind = ScanKind::kPureGrid;

  // Pure grid and weak field: theta range. Weak field uses phi_min_deg only.
  double theta_min_deg = 0.0;
  double theta_max_deg = 90.0;
  double theta_step_deg = 1.0;
  double phi_min_deg = 0.0;
  double phi_max_deg = 90.0;
  double phi_step_deg = 1.0;

  // Bloch disk: mixtures of theta1 and theta1 + 180 deg with weight alpha.
  double theta1_min_deg = 0.0;
  double theta1_max_deg = 180.0;
  double theta1_step_deg = 1.0;
  int alpha_divisions = 30;  // alpha step = 1 / alpha_divisions over [-1, 1]

  // Weak field.
  std::vector<double> mean_photons{6e-3, 1e-1};
  std::uint64_t pulses = 1'000'000;  // per setup
  std::uint64_t seed = 1;
  SourceModel source{.kind = SourceKind::kWeakCoherent};
  DetectorModel detector;

  void validate() const;
};

struct ResultRow {
  std::optional<double> theta_deg;
  std::optional<double> phi_deg;
  std::optional<double> theta1_deg;
  std::optional<double> theta2_deg;
  std::optional<double> alpha;
  std::optional<double> mean_photons;
  std::optional<bool> dark_corrected;
  BlochVector bloch;
  Quasiprobability quasi;
  std::optional<double> negativity_statistical;
  std::optional<double> negativity_systematic;
};

// Rows in deterministic order: theta (or theta1) outer, phi (or alpha)
// inner; weak-field rows iterate theta, then mean photon number, then
// uncorrected before dark-corrected.
std::vector<ResultRow> run_scan(const ScanSpec& spec, std::size_t threads = 0);

inline constexpr int kScanSchemaVersion = 1;

// CSV with a leading "# schema_version: N" comment; empty fields for
// coordinates a scan kind does not use.
void write_scan_csv(std::ostream& os, const std::vector<ResultRow>& rows);
void write_scan_file(const std::string& path, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_scan_csv(std::istream& is, const std::string& source);

}  // namespace oqlab
