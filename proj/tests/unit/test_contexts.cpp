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

#include <gtest/gtest.h>

#include <random>

#include "oqlab/contexts.hpp"
#include "oracles.hpp"

namespace oqlab {
namespace {

constexpr double kTol = 1e-12;

QubitState random_state(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> u(0, 1);
  double x = n(rng), y = n(rng), z = n(rng);
  const double s = std::cbrt(u(rng)) / std::sqrt(x * x + y * y + z * z);
  return QubitState::from_bloch({x * s, y * s, z * s});
}

TEST(Contexts, FourSetupsAndDetectorMapping) {
  const auto all = MeasurementContext::all();
  EXPECT_EQ(all.size(), 4u);
  EXPECT_EQ(to_string(kSequential), "(1,1)");
  EXPECT_EQ(detector_label(detector_index(1, 0)), "D10");
  // With PBS1 out every photon lands on row a1 = 0.
  EXPECT_EQ(detector_for(kDaOnly, 1, 1), detector_index(0, 1));
  EXPECT_EQ(detector_for(kHvOnly, 1, 1), detector_index(1, 0));
  EXPECT_EQ(detector_for(kNoMeasurement, 1, 1), detector_index(0, 0));
  EXPECT_TRUE(detector_active(kDaOnly, detector_index(0, 1)));
  EXPECT_FALSE(detector_active(kDaOnly, detector_index(1, 0)));
}

TEST(Projectors, KnownEntriesAndOrthogonality) {
  const auto hv = hv_projectors();
  const auto da = da_projectors();
  EXPECT_LE(max_abs_diff(hv[0], Mat2{{1.0, 0.0, 0.0, 0.0}}), kTol);
  EXPECT_LE(max_abs_diff(da[0], Mat2{{0.5, 0.5, 0.5, 0.5}}), kTol);
  EXPECT_LE(max_abs_diff(da[0] * da[1], Mat2::zero()), kTol);
  EXPECT_LE(max_abs_diff(hv[0] * hv[1], Mat2::zero()), kTol);
  EXPECT_LE(max_abs_diff(hv[0] + hv[1], Mat2::identity()), kTol);
  EXPECT_LE(max_abs_diff(da[0] + da[1], Mat2::identity()), kTol);
  for (const auto& p : {hv[0], hv[1], da[0], da[1]}) {
    EXPECT_LE(max_abs_diff(p * p, p), kTol);
    EXPECT_NEAR(p.trace().real(), 1.0, kTol);
  }
}

TEST(SingleProbs, Examples) {
  const auto h = single_probs(make_pure_state(0, 0), Basis::kHV);
  EXPECT_NEAR(h[0], 1.0, kTol);
  EXPECT_NEAR(h[1], 0.0, kTol);
  const auto s = make_pure_state(kPi / 4, 0);
  const auto b = bloch_vector(s);
  const auto hv = single_probs(s, Basis::kHV);
  const auto da = single_probs(s, Basis::kDA);
  EXPECT_NEAR(hv[0], 0.853553390593274, kTol);
  EXPECT_NEAR(hv[1], 0.146446609406726, kTol);
  EXPECT_NEAR(hv[0], (1 + b.z) / 2, kTol);
  EXPECT_NEAR(da[0], 0.853553390593274, kTol);
  EXPECT_NEAR(da[0], (1 + b.x) / 2, kTol);
}

TEST(SequentialProbs, Examples) {
  const auto h = sequential_probs(make_pure_state(0, 0));
  EXPECT_NEAR(h[0][0], 0.5, kTol);
  EXPECT_NEAR(h[0][1], 0.5, kTol);
  EXPECT_NEAR(h[1][0], 0.0, kTol);
  EXPECT_NEAR(h[1][1], 0.0, kTol);
  const auto j = sequential_probs(make_pure_state(kPi / 4, 0));
  const auto o = oracle::probabilities(oracle::pure(kPi / 4, 0)).joint;
  const double expect[2][2] = {{0.426776695296637, 0.426776695296637},
                               {0.073223304703363, 0.073223304703363}};
  for (int a1 = 0; a1 < 2; ++a1) {
    for (int a2 = 0; a2 < 2; ++a2) {
      EXPECT_NEAR(j[a1][a2], expect[a1][a2], kTol);
      EXPECT_NEAR(j[a1][a2], o[a1][a2], kTol);
    }
  }
}

TEST(ContextTable, Examples) {
  const auto m = context_table(QubitState::from_density(0.5 * Mat2::identity()));
  for (int a = 0; a < 2; ++a) {
    EXPECT_NEAR(m.p_t1[a], 0.5, kTol);
    EXPECT_NEAR(m.p_t2[a], 0.5, kTol);
    EXPECT_NEAR(m.p_joint[a][0], 0.25, kTol);
    EXPECT_NEAR(m.p_joint[a][1], 0.25, kTol);
  }
  const auto d = context_table(make_pure_state(kPi / 2, 0));
  EXPECT_NEAR(d.p_t2[0], 1.0, kTol);
  EXPECT_NEAR(d.p_t2[1], 0.0, kTol);
  EXPECT_NEAR(d.p_t1[0], 0.5, kTol);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(d.p_joint[k / 2][k % 2], 0.25, kTol);
}

TEST(ContextTable, NsitFailsForTheta45) {
  const auto p = context_table(make_pure_state(kPi / 4, 0));
  EXPECT_NEAR(p.p_joint[0][0] + p.p_joint[1][0], 0.5, kTol);
  EXPECT_NEAR(p.p_t2[0], 0.853553390593274, kTol);
}

TEST(ContextTable, RandomStatesMatchOracleAndSatisfyAot) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 1000; ++i) {
    const auto s = random_state(rng);
    const auto p = context_table(s);
    const auto o = oracle::probabilities(oracle::to_eigen(s.density()));
    double joint_total = 0;
    for (int a1 = 0; a1 < 2; ++a1) {
      EXPECT_NEAR(p.p_t1[a1], o.t1[a1], kTol);
      EXPECT_NEAR(p.p_t2[a1], o.t2[a1], kTol);
      // Arrow of time holds for a projective first measurement.
      EXPECT_NEAR(p.p_joint[a1][0] + p.p_joint[a1][1], p.p_t1[a1], kTol);
      for (int a2 = 0; a2 < 2; ++a2) {
        EXPECT_NEAR(p.p_joint[a1][a2], o.joint[a1][a2], kTol);
        // H/V eigenstates are unbiased in D/A.
        EXPECT_NEAR(p.p_joint[a1][a2], p.p_t1[a1] / 2, kTol);
        EXPECT_GE(p.p_joint[a1][a2], 0.0);
        joint_total += p.p_joint[a1][a2];
      }
    }
    EXPECT_NEAR(p.p_t1[0] + p.p_t1[1], 1.0, kTol);
    EXPECT_NEAR(p.p_t2[0] + p.p_t2[1], 1.0, kTol);
    EXPECT_NEAR(joint_total, 1.0, kTol);
  }
}

}  // namespace
}  // namespace oqlab
