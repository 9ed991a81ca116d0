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

// Stochastic photon-counting simulation of the polarization experiment:
// source models, a lossy/leaky optical train with threshold detectors, and
// time-tagged click streams for second-order correlation runs.
//
// Optical train. Each polarizing beam splitter is modelled by two numbers:
//   pbs_transmit_leak  extinction-limited routing error; a photon leaves by
//                      the wrong port with this probability (either way).
//   pbs_reflect_leak   polarization impurity of the reflected output; a
//                      reflected photon carries the orthogonal polarization
//                      with this probability. It only affects elements
//                      further down the same path.
// The D/A analyzers (HWP at 22.5 deg + PBS) are treated as a D/A PBS whose
// transmitted port is D.

#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "oqlab/contexts.hpp"
#include "oqlab/qcore.hpp"

namespace oqlab {

enum class SourceKind { kHeraldedSpdc, kSingleEmitter, kWeakCoherent };

const char* to_string(SourceKind kind);
SourceKind source_kind_from_string(const std::string& name);

struct SourceModel {
  SourceKind kind = SourceKind::kHeraldedSpdc;
  // Weak coherent pulses.
  double mean_photons_per_pulse = 6e-3;
  double repetition_rate = 3.8e6;  // Hz
  // Heralded SPDC.
  double pair_rate = 1e6;          // pairs / s
  double herald_efficiency = 0.5;  // detection probability per arm
  // Single emitter.
  double excited_lifetime_ns = 4.0;
  double excitation_rate = 2e7;        // 1 / s
  double collection_efficiency = 0.01;  // fraction of emitted photons detected

  void validate() const;
};

struct DetectorModel {
  std::array<double, kDetectorCount> efficiency{1.0, 1.0, 1.0, 1.0};
  double dark_rate = 1e3;           // counts / s per detector
  double dark_gate_ns = 5.5;        // effective dark-count window per registered photon
  double pbs_reflect_leak = 0.05;
  double pbs_transmit_leak = 0.001;
  double waveplate_angle_error_deg = 0.5;  // systematic, drawn once per run
  double coincidence_window_ns = 5.5;
  double timing_jitter_ns = 0.61;  // Gaussian sigma

  void validate() const;

  // Perfect optics and detectors: no leaks, darks, misalignment or jitter.
  static DetectorModel ideal();
};

struct CountTable {
  MeasurementContext setup;
  std::array<std::uint64_t, kDetectorCount> counts{};

  std::uint64_t total() const;
  std::uint64_t at(int a1, int a2) const { return counts[detector_index(a1, a2)]; }
};

struct ClickEvent {
  double time_ns = 0.0;
  int detector = 0;
};

// Time-ordered click record. Construction sorts the events.
class ClickStream {
 public:
  ClickStream() = default;
  explicit ClickStream(std::vector<ClickEvent> events);

  const std::vector<ClickEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }

 private:
  std::vector<ClickEvent> events_;
};

// Raw detector channels plus the pair of streams fed to the start-stop
// correlator. For SPDC the detector channels are S1, S2, I1, I2 and the HBT
// inputs are the AND gates S1&I1 and S2&I2; otherwise there are two
// channels behind a 50:50 splitter and they feed the correlator directly.
struct ClickStreamSet {
  std::vector<ClickStream> detectors;
  ClickStream start;
  ClickStream stop;
};

// Seed for task `index` of a run seeded with `master` (SplitMix64 mixing).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// Probability that one input photon is registered by each detector, after
// routing, leakage and detector efficiency. The remainder is lost.
std::array<double, kDetectorCount> detector_probabilities(const QubitState& state,
                                                          const MeasurementContext& setup,
                                                          const DetectorModel& det);

// Draws the run's systematic waveplate errors (radians) from `rng`.
std::array<double, 3> draw_waveplate_errors(const DetectorModel& det, std::mt19937_64& rng);

CountTable simulate_counts(const QubitState& state, const MeasurementContext& setup,
                           std::uint64_t photons, const DetectorModel& det, std::uint64_t seed);

// Weak coherent pulses with single-click post-selection: per pulse the
// photon number is Poisson, every photon is routed independently, threshold
// detectors click at most once, and only pulses with exactly one click
// among the setup's active detectors are kept.
CountTable weakfield_run(double theta, double phi, const SourceModel& source,
                         const MeasurementContext& setup, std::uint64_t pulses,
                         const DetectorModel& det, std::uint64_t seed);

ClickStreamSet generate_click_streams(const SourceModel& source, double duration_s,
                                      const DetectorModel& det, std::uint64_t seed);

// Retained counts from a blocked-beam weak-field run (all four detectors
// active): the per-detector dark counts to subtract from a signal run of the
// same length.
std::array<std::uint64_t, kDetectorCount> measure_dark_counts(const SourceModel& source,
                                                              std::uint64_t pulses,
                                                              const DetectorModel& det,
                                                              std::uint64_t seed);

}  // namespace oqlab
