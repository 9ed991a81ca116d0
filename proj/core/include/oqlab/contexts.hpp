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

// The four measurement setups: optional H/V projective measurement at t1
// followed by an optional D/A projective measurement at t2.

#pragma once

#include <array>
#include <compare>
#include <string>

#include "oqlab/qcore.hpp"

namespace oqlab {

// n1: H/V measured at t1. n2: D/A measured at t2.
struct MeasurementContext {
  bool n1 = true;
  bool n2 = true;

  friend constexpr auto operator<=>(const MeasurementContext&, const MeasurementContext&) = default;

  static constexpr std::array<MeasurementContext, 4> all() {
    return {{{false, false}, {true, false}, {false, true}, {true, true}}};
  }
};

inline constexpr MeasurementContext kSequential{true, true};
inline constexpr MeasurementContext kHvOnly{true, false};
inline constexpr MeasurementContext kDaOnly{false, true};
inline constexpr MeasurementContext kNoMeasurement{false, false};

std::string to_string(const MeasurementContext& ctx);

// a1: 0 = H, 1 = V. a2: 0 = D, 1 = A. Each outcome pair has its own
// detector D_{a1,a2}.
struct Outcome {
  int a1 = 0;
  int a2 = 0;
};

inline constexpr int kDetectorCount = 4;

constexpr int detector_index(int a1, int a2) { return 2 * a1 + a2; }
constexpr Outcome detector_outcome(int detector) { return {detector / 2, detector % 2}; }
std::string detector_label(int detector);

// Detector that records outcome (a1, a2) in a given setup. A measurement
// that is switched off sends every photon down its "0" port, so with PBS1
// out the counts land on D_{0,a2}, and with the D/A stage out on D_{a1,0}.
constexpr int detector_for(const MeasurementContext& ctx, int a1, int a2) {
  return detector_index(ctx.n1 ? a1 : 0, ctx.n2 ? a2 : 0);
}

// True when light can reach the detector in this setup.
constexpr bool detector_active(const MeasurementContext& ctx, int detector) {
  const Outcome o = detector_outcome(detector);
  return (ctx.n1 || o.a1 == 0) && (ctx.n2 || o.a2 == 0);
}

enum class Basis { kHV, kDA };

using Grid2 = std::array<std::array<double, 2>, 2>;

std::array<Mat2, 2> hv_projectors();
std::array<Mat2, 2> da_projectors();
std::array<Mat2, 2> projectors(Basis basis);

// Born-rule probabilities p[a] = Tr(Pi_a rho).
std::array<double, 2> single_probs(const QubitState& state, Basis basis);

// P(a1, a2) = Tr[Pi^DA_a2 Pi^HV_a1 rho Pi^HV_a1] (Lueders update between).
Grid2 sequential_probs(const QubitState& state);

// Inputs of the quasiprobability: P_t1(a1), P_t2(a2) and P_t1,t2(a1, a2).
struct ProbabilitySet {
  std::array<double, 2> p_t1{};
  std::array<double, 2> p_t2{};
  Grid2 p_joint{};
};

ProbabilitySet context_table(const QubitState& state);

}  // namespace oqlab
