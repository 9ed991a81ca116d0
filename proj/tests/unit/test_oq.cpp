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

#include "oqlab/error.hpp"
#include "oqlab/oq.hpp"
#include "oracles.hpp"

namespace oqlab {
namespace {

constexpr double kTol = 1e-12;

TEST(OqDistribution, MaximallyMixedIsFlat) {
  const auto q = oq_distribution(context_table(QubitState::from_density(0.5 * Mat2::identity())));
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(q.w[k / 2][k % 2], 0.25, kTol);
  EXPECT_EQ(q.negativity, 0.0);
}

TEST(OqDistribution, Theta45ReachesTheMaximum) {
  const auto q = oq_distribution(context_table(make_pure_state(kPi / 4, 0)));
  const double expect[4] = {0.603553390593274, 0.25, 0.25, -0.103553390593274};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(q.w[k / 2][k % 2], expect[k], kTol);
  EXPECT_NEAR(q.negativity, (std::sqrt(2.0) - 1) / 4, kTol);
  EXPECT_NEAR(q.negativity, kMaxNegativity, kTol);
  EXPECT_NEAR(q.max_aot_dev(), 0.0, kTol);
  EXPECT_NEAR(q.max_nsit_dev(), 0.353553390593274, kTol);
}

TEST(OqDistribution, ClassicalModelsAreReproduced) {
  // A joint distribution with matching marginals satisfies NSIT and AoT.
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 100; ++i) {
    Grid2 j{};
    double total = 0;
    for (auto& row : j) {
      for (auto& v : row) total += (v = u(rng));
    }
    ProbabilitySet ps;
    for (auto& row : j) {
      for (auto& v : row) v /= total;
    }
    ps.p_joint = j;
    ps.p_t1 = {j[0][0] + j[0][1], j[1][0] + j[1][1]};
    ps.p_t2 = {j[0][0] + j[1][0], j[0][1] + j[1][1]};
    const auto q = oq_distribution(ps);
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(q.w[k / 2][k % 2], j[k / 2][k % 2], kTol);
    EXPECT_EQ(q.negativity, 0.0);
  }
}

TEST(OqDistribution, RejectsInvalidProbabilitySets) {
  ProbabilitySet ps;
  ps.p_t1 = {0.5, 0.5};
  ps.p_t2 = {0.5, 0.6};
  ps.p_joint = {{{0.25, 0.25}, {0.25, 0.25}}};
  EXPECT_THROW(oq_distribution(ps), Error);
  ps.p_t2 = {1.2, -0.2};
  EXPECT_THROW(oq_distribution(ps), Error);
}

TEST(Negativity, DefinitionExamples) {
  EXPECT_EQ(negativity({{{0.25, 0.25}, {0.25, 0.25}}}), 0.0);
  EXPECT_NEAR(negativity({{{0.60355, 0.25}, {0.25, -0.10355}}}), 0.10355, kTol);
  EXPECT_NEAR(negativity({{{0.5, 0.5}, {0.1, -0.1}}}), 0.1, kTol);
  EXPECT_THROW(negativity({{{0.5, 0.5}, {0.5, 0.5}}}), Error);
}

TEST(ClosedForm, BoundaryAndDiamond) {
  const auto h = oq_closed_form(0, 1);
  EXPECT_NEAR(h[0][0], 0.5, kTol);
  EXPECT_NEAR(h[0][1], 0.5, kTol);
  EXPECT_NEAR(h[1][0], 0.0, kTol);
  EXPECT_NEAR(negativity_region(0, 1), 0.0, kTol);
  const double r = std::sqrt(0.5);
  EXPECT_NEAR(negativity_region(r, r), kMaxNegativity, kTol);
  EXPECT_NEAR(negativity_region(0.5, 0.5), 0.0, kTol);
  EXPECT_GT(negativity_region(0.6, 0.6), 0.0);
  EXPECT_THROW(oq_closed_form(1, 1), Error);
}

TEST(ClosedForm, AgreesWithTheFullPipelineOnRandomStates) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> th(0, 2 * kPi), al(-1, 1);
  for (int i = 0; i < 1000; ++i) {
    const auto s = (i % 2) ? make_pure_state(th(rng), th(rng))
                           : make_mixed_state(th(rng), th(rng), al(rng));
    const auto b = bloch_vector(s);
    const auto q = oq_distribution(context_table(s));
    const auto cf = oq_closed_form(b.x, b.z);
    const auto oc = oracle::closed_form(b.x, b.z);
    const auto ow = oracle::quasi(oracle::probabilities(oracle::to_eigen(s.density())));
    for (int k = 0; k < 4; ++k) {
      EXPECT_NEAR(q.w[k / 2][k % 2], cf[k / 2][k % 2], kTol);
      EXPECT_NEAR(q.w[k / 2][k % 2], oc[k], kTol);
      EXPECT_NEAR(q.w[k / 2][k % 2], ow[k], kTol);
    }
    EXPECT_NEAR(q.negativity, oracle::negativity(oc), kTol);
    EXPECT_NEAR(q.negativity, negativity_region(b.x, b.z), kTol);
  }
}

TEST(Quasiprobability, StructuralInvariantsOnRandomSets) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 10000; ++i) {
    ProbabilitySet ps;
    const double a = u(rng), b = u(rng);
    ps.p_t1 = {a, 1 - a};
    ps.p_t2 = {b, 1 - b};
    double total = 0;
    for (auto& row : ps.p_joint) {
      for (auto& v : row) total += (v = u(rng));
    }
    for (auto& row : ps.p_joint) {
      for (auto& v : row) v /= total;
    }
    const auto q = oq_distribution(ps);
    double sum = 0;
    for (int a1 = 0; a1 < 2; ++a1) {
      EXPECT_NEAR(q.w[a1][0] + q.w[a1][1], ps.p_t1[a1], kTol);
      EXPECT_NEAR(q.w[0][a1] + q.w[1][a1], ps.p_t2[a1], kTol);
      sum += q.w[a1][0] + q.w[a1][1];
    }
    EXPECT_NEAR(sum, 1.0, kTol);
    EXPECT_GE(q.negativity, 0.0);
    EXPECT_LE(q.negativity, 0.5);
    if (q.negativity > 0) EXPECT_GT(q.max_nsit_dev() + q.max_aot_dev(), 0.0);
  }
}

}  // namespace
}  // namespace oqlab
