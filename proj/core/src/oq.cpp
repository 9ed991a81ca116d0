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

#include "oqlab/oq.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oqlab/error.hpp"

namespace oqlab {

double Quasiprobability::max_nsit_dev() const { return std::max(nsit_dev[0], nsit_dev[1]); }

double Quasiprobability::max_aot_dev() const { return std::max(aot_dev[0], aot_dev[1]); }

namespace {

template <typename Range>
void check_block(const Range& block, const char* name, double tolerance) {
  double sum = 0.0;
  for (double p : block) {
    if (!std::isfinite(p) || p < -tolerance) {
      std::ostringstream os;
      os << name << " has an invalid entry " << p;
      throw Error(ErrorCode::kInvalidInput, os.str());
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > tolerance) {
    std::ostringstream os;
    os << name << " sums to " << sum << " instead of 1";
    throw Error(ErrorCode::kInvalidInput, os.str());
  }
}

void check_unit_disk(double x, double z) {
  if (!std::isfinite(x) || !std::isfinite(z) || x * x + z * z > 1.0 + 1e-12) {
    throw Error(ErrorCode::kInvalidArgument, "(x, z) must lie in the closed unit disk");
  }
}

}  // namespace

void validate(const ProbabilitySet& ps, double tolerance) {
  check_block(ps.p_t1, "P_t1", tolerance);
  check_block(ps.p_t2, "P_t2", tolerance);
  const std::array<double, 4> joint{ps.p_joint[0][0], ps.p_joint[0][1], ps.p_joint[1][0],
                                    ps.p_joint[1][1]};
  check_block(joint, "P_t1t2", tolerance);
}

Quasiprobability oq_distribution(const ProbabilitySet& ps) {
  validate(ps);
  const Grid2& joint = ps.p_joint;
  const std::array<double, 2> joint_t1{joint[0][0] + joint[0][1], joint[1][0] + joint[1][1]};
  const std::array<double, 2> joint_t2{joint[0][0] + joint[1][0], joint[0][1] + joint[1][1]};

  Quasiprobability q;
  for (int a1 = 0; a1 < 2; ++a1) {
    for (int a2 = 0; a2 < 2; ++a2) {
      q.w[a1][a2] = joint[a1][a2] + 0.5 * (ps.p_t1[a1] - joint_t1[a1]) +
                    0.5 * (ps.p_t2[a2] - joint_t2[a2]);
    }
  }
  for (int a = 0; a < 2; ++a) {
    q.aot_dev[a] = std::abs(ps.p_t1[a] - joint_t1[a]);
    q.nsit_dev[a] = std::abs(ps.p_t2[a] - joint_t2[a]);
  }
  q.negativity = negativity(q.w);
  return q;
}

double negativity(const Grid2& w) {
  double sum = 0.0;
  double total = 0.0;
  for (const auto& row : w) {
    for (double v : row) {
      sum += std::abs(v) - v;
      total += v;
    }
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidInput, "quasiprobability does not sum to 1");
  }
  return 0.5 * sum;
}

Grid2 oq_closed_form(double x, double z) {
  check_unit_disk(x, z);
  Grid2 w{};
  for (int a1 = 0; a1 < 2; ++a1) {
    for (int a2 = 0; a2 < 2; ++a2) {
      const double sz = a1 == 0 ? z : -z;
      const double sx = a2 == 0 ? x : -x;
      w[a1][a2] = 0.25 * (1.0 + sz + sx);
    }
  }
  return w;
}

double negativity_region(double x, double z) {
  check_unit_disk(x, z);
  return std::max(0.0, 0.25 * (std::abs(x) + std::abs(z) - 1.0));
}

}  // namespace oqlab
