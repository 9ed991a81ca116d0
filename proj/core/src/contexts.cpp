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

#include "oqlab/contexts.hpp"

#include <algorithm>
#include <cmath>

namespace oqlab {

std::string to_string(const MeasurementContext& ctx) {
  return std::string("(") + (ctx.n1 ? "1" : "0") + "," + (ctx.n2 ? "1" : "0") + ")";
}

std::string detector_label(int detector) {
  const Outcome o = detector_outcome(detector);
  return "D" + std::to_string(o.a1) + std::to_string(o.a2);
}

std::array<Mat2, 2> hv_projectors() {
  return {Mat2{{1.0, 0.0, 0.0, 0.0}}, Mat2{{0.0, 0.0, 0.0, 1.0}}};
}

std::array<Mat2, 2> da_projectors() {
  return {Mat2{{0.5, 0.5, 0.5, 0.5}}, Mat2{{0.5, -0.5, -0.5, 0.5}}};
}

std::array<Mat2, 2> projectors(Basis basis) {
  return basis == Basis::kHV ? hv_projectors() : da_projectors();
}

namespace {

double born(const Mat2& projector, const Mat2& rho) {
  // Tiny negative values from round-off are clipped.
  return std::max(0.0, (projector * rho).trace().real());
}

}  // namespace

std::array<double, 2> single_probs(const QubitState& state, Basis basis) {
  const auto pi = projectors(basis);
  return {born(pi[0], state.density()), born(pi[1], state.density())};
}

Grid2 sequential_probs(const QubitState& state) {
  const auto hv = hv_projectors();
  const auto da = da_projectors();
  Grid2 p{};
  for (int a1 = 0; a1 < 2; ++a1) {
    const Mat2 collapsed = hv[a1] * state.density() * hv[a1];
    for (int a2 = 0; a2 < 2; ++a2) p[a1][a2] = born(da[a2], collapsed);
  }
  return p;
}

ProbabilitySet context_table(const QubitState& state) {
  return {single_probs(state, Basis::kHV), single_probs(state, Basis::kDA),
          sequential_probs(state)};
}

}  // namespace oqlab
