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

#include "oqlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <utility>

#include "oqlab/error.hpp"

namespace oqlab {
namespace {

using Cells = std::array<double, kDetectorCount>;

struct TableInput {
  MeasurementContext setup;
  Cells counts{};  // raw counts, before calibration
};

const CountTable& require(const ExperimentRecord& rec, const MeasurementContext& setup) {
  auto it = rec.tables.find(setup);
  if (it == rec.tables.end()) {
    throw Error(ErrorCode::kMissingData, "record has no count table for setup " + to_string(setup));
  }
  return it->second;
}

std::vector<MeasurementContext> required_setups(EstimationMode mode) {
  if (mode == EstimationMode::kStrict) return {kSequential, kDaOnly, kHvOnly};
  return {kSequential, kDaOnly};
}

std::vector<TableInput> gather(const ExperimentRecord& rec, EstimationMode mode) {
  for (double c : rec.calibration) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw Error(ErrorCode::kInvalidInput, "calibration factors must be positive and finite");
    }
  }
  std::vector<TableInput> out;
  for (const auto& setup : required_setups(mode)) {
    const CountTable& t = require(rec, setup);
    TableInput in{setup, {}};
    for (int d = 0; d < kDetectorCount; ++d) in.counts[d] = static_cast<double>(t.counts[d]);
    out.push_back(in);
  }
  return out;
}

double ratio(double num, double den, const MeasurementContext& setup) {
  if (!(den > 0.0)) {
    throw Error(ErrorCode::kDegenerateData,
                "zero total counts in the cells used from setup " + to_string(setup));
  }
  return num / den;
}

// Tables are ordered as returned by required_setups.
ProbabilitySet probs_from(const std::vector<TableInput>& tables, const Cells& cal,
                          EstimationMode mode) {
  ProbabilitySet ps;
  auto calibrated = [&](const TableInput& t) {
    Cells c{};
    for (int d = 0; d < kDetectorCount; ++d) c[d] = t.counts[d] * cal[d];
    return c;
  };

  const Cells seq = calibrated(tables[0]);
  double seq_total = 0.0;
  for (double v : seq) seq_total += v;
  for (int a1 = 0; a1 < 2; ++a1) {
    for (int a2 = 0; a2 < 2; ++a2) {
      ps.p_joint[a1][a2] = ratio(seq[detector_index(a1, a2)], seq_total, kSequential);
    }
  }

  const Cells da = calibrated(tables[1]);
  const double da_row = da[detector_index(0, 0)] + da[detector_index(0, 1)];
  for (int a2 = 0; a2 < 2; ++a2) ps.p_t2[a2] = ratio(da[detector_index(0, a2)], da_row, kDaOnly);

  if (mode == EstimationMode::kStrict) {
    const Cells hv = calibrated(tables[2]);
    const double hv_col = hv[detector_index(0, 0)] + hv[detector_index(1, 0)];
    for (int a1 = 0; a1 < 2; ++a1) ps.p_t1[a1] = ratio(hv[detector_index(a1, 0)], hv_col, kHvOnly);
  } else {
    for (int a1 = 0; a1 < 2; ++a1) ps.p_t1[a1] = ps.p_joint[a1][0] + ps.p_joint[a1][1];
  }
  return ps;
}

// Derivatives of every scalar output of `f` with respect to each raw count,
// by central differences. Result indexed [table][detector][output].
template <std::size_t K>
std::vector<std::array<std::array<double, K>, kDetectorCount>> count_gradients(
    std::vector<TableInput> tables,
    const std::function<std::array<double, K>(const std::vector<TableInput>&)>& f) {
  std::vector<std::array<std::array<double, K>, kDetectorCount>> grad(tables.size());
  for (std::size_t t = 0; t < tables.size(); ++t) {
    double total = 0.0;
    for (double v : tables[t].counts) total += v;
    const double h = 1e-5 * std::max(total, 1.0);
    for (int d = 0; d < kDetectorCount; ++d) {
      const double keep = tables[t].counts[d];
      if (keep == 0.0 && !detector_active(tables[t].setup, d)) {
        grad[t][d].fill(0.0);
        continue;
      }
      tables[t].counts[d] = keep + h;
      const auto up = f(tables);
      // Counts cannot go negative; fall back to a one-sided step at zero.
      const double down_step = std::min(h, keep);
      tables[t].counts[d] = keep - down_step;
      const auto down = f(tables);
      tables[t].counts[d] = keep;
      for (std::size_t k = 0; k < K; ++k) grad[t][d][k] = (up[k] - down[k]) / (h + down_step);
    }
  }
  return grad;
}

std::vector<ComponentError> merge_by_name(const std::vector<ComponentError>& in) {
  std::vector<ComponentError> out;
  for (const auto& c : in) {
    auto it = std::find_if(out.begin(), out.end(), [&](const ComponentError& o) {
      return o.name == c.name && o.relative_error == c.relative_error;
    });
    if (it == out.end()) {
      out.push_back(c);
    } else {
      it->times_used += c.times_used;
    }
  }
  return out;
}

using Path = std::pair<MeasurementContext, int>;

// Detector paths entering w(a1, a2).
void cell_paths(int a1, int a2, EstimationMode mode, std::set<Path>& paths) {
  paths.insert({kSequential, detector_index(0, a2)});
  paths.insert({kSequential, detector_index(1, a2)});
  paths.insert({kDaOnly, detector_index(0, 0)});
  paths.insert({kDaOnly, detector_index(0, 1)});
  if (mode == EstimationMode::kStrict) {
    paths.insert({kSequential, detector_index(a1, 0)});
    paths.insert({kSequential, detector_index(a1, 1)});
    paths.insert({kHvOnly, detector_index(0, 0)});
    paths.insert({kHvOnly, detector_index(1, 0)});
  }
}

std::vector<std::pair<int, int>> negativity_cells(const Grid2& w) {
  std::vector<std::pair<int, int>> cells;
  std::pair<int, int> smallest{0, 0};
  for (int a1 = 0; a1 < 2; ++a1) {
    for (int a2 = 0; a2 < 2; ++a2) {
      if (w[a1][a2] < 0.0) cells.emplace_back(a1, a2);
      if (w[a1][a2] < w[smallest.first][smallest.second]) smallest = {a1, a2};
    }
  }
  if (cells.empty()) cells.push_back(smallest);
  return cells;
}

}  // namespace

ProbabilitySet estimate_probs(const ExperimentRecord& record, EstimationMode mode) {
  return probs_from(gather(record, mode), record.calibration, mode);
}

ExperimentRecord dark_count_correction(const ExperimentRecord& record,
                                       const std::array<std::uint64_t, kDetectorCount>& dark) {
  ExperimentRecord out = record;
  for (auto& [setup, table] : out.tables) {
    for (int d = 0; d < kDetectorCount; ++d) {
      if (!detector_active(setup, d)) continue;
      if (dark[d] > table.counts[d]) {
        table.counts[d] = 0;
        out.dark_clamped = true;
      } else {
        table.counts[d] -= dark[d];
      }
    }
  }
  return out;
}

std::array<double, kDetectorCount> calibration_from_reference(const CountTable& reference) {
  double sum = 0.0;
  for (auto c : reference.counts) {
    if (c == 0) {
      throw Error(ErrorCode::kDegenerateData, "calibration reference has an empty detector");
    }
    sum += static_cast<double>(c);
  }
  const double mean = sum / kDetectorCount;
  std::array<double, kDetectorCount> factors{};
  for (int d = 0; d < kDetectorCount; ++d) {
    factors[d] = mean / static_cast<double>(reference.counts[d]);
  }
  return factors;
}

ErrorBudget error_budget(std::span<const ComponentError> components, ErrorCombination mode) {
  ErrorBudget budget;
  double acc = 0.0;
  for (const auto& c : components) {
    if (!(c.relative_error >= 0.0 && c.relative_error < 1.0) || c.times_used < 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "component '" + c.name + "' needs an error in [0,1) and a nonnegative use count");
    }
    const double sq = c.relative_error * c.relative_error * c.times_used;
    acc += mode == ErrorCombination::kRootSumSquare ? sq : std::sqrt(sq);
    budget.components.push_back(c);
  }
  budget.total_error = mode == ErrorCombination::kRootSumSquare ? std::sqrt(acc) : acc;
  return budget;
}

std::vector<ComponentError> path_components(const MeasurementContext& setup, int detector,
                                            const ComponentErrors& errors) {
  if (detector < 0 || detector >= kDetectorCount) {
    throw Error(ErrorCode::kInvalidArgument, "detector index out of range");
  }
  if (!detector_active(setup, detector)) {
    throw Error(ErrorCode::kInvalidArgument,
                detector_label(detector) + " receives no light in setup " + to_string(setup));
  }
  const Outcome o = detector_outcome(detector);
  auto pbs = [&](int port) {
    return port == 0 ? ComponentError{"PBS transmission", errors.pbs_transmission, 1}
                     : ComponentError{"PBS reflection", errors.pbs_reflection, 1};
  };
  std::vector<ComponentError> out;
  if (setup.n1) out.push_back(pbs(o.a1));
  if (setup.n2) {
    out.push_back({"HWP", errors.hwp, 1});
    out.push_back(pbs(o.a2));
  }
  out.push_back({"APD", errors.apd, 1});
  return out;
}

ErrorBudget quantity_error_budget(const Quantity& quantity, const Grid2& w, EstimationMode mode,
                                  const ComponentErrors& errors, ErrorCombination combine) {
  std::set<Path> paths;
  if (quantity.kind == QuantityKind::kWCell) {
    if (quantity.a1 < 0 || quantity.a1 > 1 || quantity.a2 < 0 || quantity.a2 > 1) {
      throw Error(ErrorCode::kInvalidArgument, "W cell index out of range");
    }
    cell_paths(quantity.a1, quantity.a2, mode, paths);
  } else {
    for (auto [a1, a2] : negativity_cells(w)) cell_paths(a1, a2, mode, paths);
  }
  std::vector<ComponentError> all;
  for (const auto& [setup, d] : paths) {
    auto part = path_components(setup, d, errors);
    all.insert(all.end(), part.begin(), part.end());
  }
  const auto merged = merge_by_name(all);
  return error_budget(merged, combine);
}

AnalysisReport analyze(const ExperimentRecord& record, const AnalysisOptions& options) {
  const auto tables = gather(record, options.mode);
  const auto cal = record.calibration;
  const auto mode = options.mode;

  AnalysisReport report;
  report.metadata = record.metadata;
  report.mode = mode;
  report.dark_clamped = record.dark_clamped;
  report.probabilities = probs_from(tables, cal, mode);
  report.quasi = oq_distribution(report.probabilities);
  report.negativity_budget = quantity_error_budget({QuantityKind::kNegativity, 0, 0},
                                                   report.quasi.w, mode, options.component_errors,
                                                   options.combination);

  // Outputs: w00, w01, w10, w11, negativity.
  using Out = std::array<double, 5>;
  const std::function<Out(const std::vector<TableInput>&)> f =
      [&](const std::vector<TableInput>& t) {
        const auto q = oq_distribution(probs_from(t, cal, mode));
        return Out{q.w[0][0], q.w[0][1], q.w[1][0], q.w[1][1], q.negativity};
      };
  const auto grad = count_gradients<5>(tables, f);

  Out stat_var{};
  Out sys_acc{};
  for (std::size_t t = 0; t < tables.size(); ++t) {
    for (int d = 0; d < kDetectorCount; ++d) {
      const double n = tables[t].counts[d];
      if (!detector_active(tables[t].setup, d)) continue;
      const auto path = path_components(tables[t].setup, d, options.component_errors);
      const double rel = error_budget(merge_by_name(path), options.combination).total_error;
      for (std::size_t k = 0; k < 5; ++k) {
        stat_var[k] += grad[t][d][k] * grad[t][d][k] * n;
        const double shift = std::abs(grad[t][d][k] * n * rel);
        sys_acc[k] += options.combination == ErrorCombination::kRootSumSquare ? shift * shift
                                                                              : shift;
      }
    }
  }
  auto sys = [&](std::size_t k) {
    return options.combination == ErrorCombination::kRootSumSquare ? std::sqrt(sys_acc[k])
                                                                   : sys_acc[k];
  };
  for (int k = 0; k < 4; ++k) {
    report.w_statistical[k / 2][k % 2] = std::sqrt(stat_var[k]);
    report.w_systematic[k / 2][k % 2] = sys(k);
  }
  report.negativity_statistical = std::sqrt(stat_var[4]);
  report.negativity_systematic = sys(4);
  if (report.quasi.negativity == 0.0) {
    // Flat at zero; quote how far the smallest cell could move instead.
    const auto [a1, a2] = negativity_cells(report.quasi.w).front();
    report.negativity_statistical = report.w_statistical[a1][a2];
    report.negativity_systematic = report.w_systematic[a1][a2];
  }
  return report;
}

AnalysisReport predict(const QubitState& state) {
  AnalysisReport report;
  report.probabilities = context_table(state);
  report.quasi = oq_distribution(report.probabilities);
  return report;
}

}  // namespace oqlab
