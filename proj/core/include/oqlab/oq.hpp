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

// Operational quasiprobability of a two-time sequential measurement.
//
//   W(a1,a2) = P12(a1,a2) + [P1(a1) - P12(a1)]/2 + [P2(a2) - P12(a2)]/2
//
// where P12(a1) and P12(a2) are marginals of the sequential distribution.
// W has the single-measurement probabilities as its marginals and may be
// negative; the negativity is the total weight of its negative cells.

#pragma once

#include <array>
#include <numbers>

#include "oqlab/contexts.hpp"

namespace oqlab {

inline constexpr double kMaxNegativity = (std::numbers::sqrt2 - 1.0) / 4.0;

struct Quasiprobability {
  Grid2 w{};
  double negativity = 0.0;
  // |P2(a2) - sum_a1 P12(a1,a2)|: no-signaling-in-time violation per outcome.
  std::array<double, 2> nsit_dev{};
  // |P1(a1) - sum_a2 P12(a1,a2)|: arrow-of-time violation per outcome.
  std::array<double, 2> aot_dev{};

  double max_nsit_dev() const;
  double max_aot_dev() const;
};

// Throws Error(kInvalidInput) if a block has an entry below -tolerance or
// does not sum to one within tolerance.
void validate(const ProbabilitySet& ps, double tolerance = 1e-9);

Quasiprobability oq_distribution(const ProbabilitySet& ps);

// N = sum(|w| - w)/2. Requires sum(w) = 1 within 1e-9.
double negativity(const Grid2& w);

// Closed form for the H/V -> D/A pair: W(a1,a2) = [1 + (-1)^a1 z + (-1)^a2 x]/4
// with (x, z) the D/A and H/V Bloch coordinates. Throws outside the unit disk.
Grid2 oq_closed_form(double x, double z);

// Exact negativity of oq_closed_form: max(0, (|x| + |z| - 1)/4).
double negativity_region(double x, double z);

}  // namespace oqlab
