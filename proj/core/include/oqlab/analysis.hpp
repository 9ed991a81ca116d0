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

// From detector counts to probabilities, quasiprobability, negativity and
// error bars.
//
// Probabilities follow the lab's reconstruction: the sequential
// distribution and P_t1 (as its a2-marginal) come from setup (1,1); P_t2
// comes from the D/A-only setup (0,1), detectors D_{0,a2}. Every table is
// normalized by its own total. Strict mode takes P_t1 from a measured
// (1,0) table instead, which tests the arrow-of-time condition rather than
// assuming it.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oqlab/contexts.hpp"
#include "oqlab/oq.hpp"
#include "oqlab/photonsim.hpp"

namespace oqlab {

struct RecordMetadata {
  std::optional<double> theta_deg;
  std::optional<double> phi_deg;
  std::optional<double> theta1_deg;
  std::optional<double> theta2_deg;
  std::optional<double> alpha;
  std::optional<std::uint64_t> seed;
  std::string source;
};

struct ExperimentRecord {
  std::map<MeasurementContext, CountTable> tables;
  // Multiplies each detector's counts before normalization.
  std::array<double, kDetectorCount> calibration{1.0, 1.0, 1.0, 1.0};
  RecordMetadata metadata;
  // Set by dark_count_correction when a subtraction had to be clamped.
  bool dark_clamped = false;

  void add(const CountTable& table) { tables[table.setup] = table; }
};

enum class EstimationMode { kLab, kStrict };

ProbabilitySet estimate_probs(const ExperimentRecord& record,
                              EstimationMode mode = EstimationMode::kLab);

// Subtracts the per-detector dark counts from every cell a detector can
// register in its setup; cells that would go negative are clamped to zero
// and `dark_clamped` is raised.
ExperimentRecord dark_count_correction(const ExperimentRecord& record,
                                       const std::array<std::uint64_t, kDetectorCount>& dark);

// Factors that equalize the detectors from a reference run in which all
// four see the same photon flux (setup (1,1) on a state with |x| = 1, or
// any table whose cells should be equal): factor_d = mean / count_d.
std::array<double, kDetectorCount> calibration_from_reference(const CountTable& reference);

// ---------------------------------------------------------------------------
// Error budget

enum class ErrorCombination {
  kRootSumSquare,  // sqrt(sum_i e_i^2 n_i)
  kSumOfRoots,     // sum_i sqrt(e_i^2 n_i)
};

struct ComponentError {
  std::string name;
  double relative_error = 0.0;
  int times_used = 1;
};

struct ErrorBudget {
  std::vector<ComponentError> components;
  double total_error = 0.0;
};

// Relative errors of the optical components. Defaults: wave-plate angle
// 1.1%, PBS reflection 5%, PBS transmission 0.1%, APD efficiency 5%.
struct ComponentErrors {
  double hwp = 0.011;
  double pbs_reflection = 0.05;
  double pbs_transmission = 0.001;
  double apd = 0.05;
};

ErrorBudget error_budget(std::span<const ComponentError> components,
                         ErrorCombination mode = ErrorCombination::kRootSumSquare);

// Components traversed on the way to `detector` in `setup`: the H/V PBS
// (when in), the D/A analyzer's HWP and PBS (when in) and the APD. Each PBS
// contributes its transmission or reflection error depending on the port.
std::vector<ComponentError> path_components(const MeasurementContext& setup, int detector,
                                            const ComponentErrors& errors = {});

enum class QuantityKind { kWCell, kNegativity };

struct Quantity {
  QuantityKind kind = QuantityKind::kNegativity;
  int a1 = 0;
  int a2 = 0;
};

// Budget of a derived quantity: components of every detector path that
// feeds it, merged by name with `times_used` counting the paths. The
// negativity is fed by the cells that are negative in `w`, or by the
// smallest cell when none is.
ErrorBudget quantity_error_budget(const Quantity& quantity, const Grid2& w,
                                  EstimationMode mode = EstimationMode::kLab,
                                  const ComponentErrors& errors = {},
                                  ErrorCombination combine = ErrorCombination::kRootSumSquare);

// ---------------------------------------------------------------------------
// Full analysis

struct AnalysisOptions {
  EstimationMode mode = EstimationMode::kLab;
  ComponentErrors component_errors;
  ErrorCombination combination = ErrorCombination::kRootSumSquare;
};

struct AnalysisReport {
  RecordMetadata metadata;
  EstimationMode mode = EstimationMode::kLab;
  ProbabilitySet probabilities;
  Quasiprobability quasi;
  ErrorBudget negativity_budget;
  // Absolute error bars. Systematic: first-order propagation of each
  // detector path's combined relative error. Statistical: multinomial
  // sampling error of the counts.
  Grid2 w_systematic{};
  Grid2 w_statistical{};
  double negativity_systematic = 0.0;
  double negativity_statistical = 0.0;
  bool dark_clamped = false;
};

AnalysisReport analyze(const ExperimentRecord& record, const AnalysisOptions& options = {});

// Exact quasiprobability of a state, in the same report form (no errors).
AnalysisReport predict(const QubitState& state);

inline constexpr int kReportSchemaVersion = 1;

// JSON document: schema_version, theta_deg, phi_deg, W, negativity,
// nsit_dev, aot_dev, error, plus probabilities and metadata.
std::string report_to_json(const AnalysisReport& report, int indent = 2);

}  // namespace oqlab
