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

#include <nlohmann/json.hpp>

#include "oqlab/analysis.hpp"
#include "oqlab/photonsim.hpp"

namespace oqlab {
namespace {

using nlohmann::ordered_json;

ordered_json grid(const Grid2& g) {
  return ordered_json::array({ordered_json::array({g[0][0], g[0][1]}),
                              ordered_json::array({g[1][0], g[1][1]})});
}

ordered_json pair(const std::array<double, 2>& p) { return ordered_json::array({p[0], p[1]}); }

template <typename T>
ordered_json optional_value(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

}  // namespace

std::string report_to_json(const AnalysisReport& report, int indent) {
  const auto& q = report.quasi;
  const auto& md = report.metadata;

  ordered_json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["theta_deg"] = optional_value(md.theta_deg);
  doc["phi_deg"] = optional_value(md.phi_deg);
  doc["W"] = grid(q.w);
  doc["negativity"] = q.negativity;
  doc["nsit_dev"] = pair(q.nsit_dev);
  doc["aot_dev"] = pair(q.aot_dev);

  ordered_json components = ordered_json::array();
  for (const auto& c : report.negativity_budget.components) {
    components.push_back(
        {{"name", c.name}, {"relative_error", c.relative_error}, {"times_used", c.times_used}});
  }
  doc["error"] = {
      {"negativity_statistical", report.negativity_statistical},
      {"negativity_systematic", report.negativity_systematic},
      {"W_statistical", grid(report.w_statistical)},
      {"W_systematic", grid(report.w_systematic)},
      {"negativity_budget",
       {{"total_relative_error", report.negativity_budget.total_error},
        {"components", components}}},
  };

  const auto& ps = report.probabilities;
  doc["probabilities"] = {{"p_t1", pair(ps.p_t1)}, {"p_t2", pair(ps.p_t2)}, {"p_joint", grid(ps.p_joint)}};

  ordered_json meta;
  meta["mode"] = report.mode == EstimationMode::kStrict ? "strict" : "lab";
  if (!md.source.empty()) meta["source"] = md.source;
  if (md.theta1_deg) meta["theta1_deg"] = *md.theta1_deg;
  if (md.theta2_deg) meta["theta2_deg"] = *md.theta2_deg;
  if (md.alpha) meta["alpha"] = *md.alpha;
  meta["seed"] = optional_value(md.seed);
  meta["dark_clamped"] = report.dark_clamped;
  doc["metadata"] = meta;

  return doc.dump(indent) + "\n";
}

}  // namespace oqlab
