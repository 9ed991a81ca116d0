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

#include <cmath>

#include "oqlab/analysis.hpp"
#include "oqlab/count_io.hpp"
#include "oqlab/error.hpp"
#include "oracles.hpp"

namespace oqlab {
namespace {

constexpr double kTol = 1e-12;

ExperimentRecord load_lab(int theta) {
  ExperimentRecord rec;
  const std::string path =
      std::string(OQLAB_TEST_DATA_DIR) + "/lab_counts_theta" + std::to_string(theta) + ".csv";
  for (const auto& t : read_count_tables_file(path)) rec.add(t);
  rec.metadata.theta_deg = theta;
  rec.metadata.phi_deg = 0;
  return rec;
}

// Count tables proportional to the exact detector probabilities.
ExperimentRecord exact_record(const QubitState& s, double scale) {
  ExperimentRecord rec;
  for (const auto& setup : {kSequential, kDaOnly, kHvOnly}) {
    const auto p = detector_probabilities(s, setup, DetectorModel::ideal());
    CountTable t{setup, {}};
    for (int d = 0; d < kDetectorCount; ++d) {
      t.counts[d] = static_cast<std::uint64_t>(std::llround(p[d] * scale));
    }
    rec.add(t);
  }
  return rec;
}

void expect_probs_near(const ProbabilitySet& a, const ProbabilitySet& b, double tol) {
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(a.p_t1[i], b.p_t1[i], tol);
    EXPECT_NEAR(a.p_t2[i], b.p_t2[i], tol);
    for (int j = 0; j < 2; ++j) EXPECT_NEAR(a.p_joint[i][j], b.p_joint[i][j], tol);
  }
}

TEST(EstimateProbs, ProportionalCountsRecoverExactProbabilities) {
  for (double th : {0.0, 0.4, kPi / 4, 1.9, 3.0}) {
    const auto s = make_pure_state(th, 0.3);
    const auto rec = exact_record(s, 1e15);
    expect_probs_near(estimate_probs(rec), context_table(s), kTol);
    expect_probs_near(estimate_probs(rec, EstimationMode::kStrict), context_table(s), kTol);
  }
}

TEST(EstimateProbs, LabCountsTheta45) {
  const auto ps = estimate_probs(load_lab(45));
  EXPECT_NEAR(ps.p_joint[0][0], 0.41520, kTol);
  EXPECT_NEAR(ps.p_joint[0][1], 0.42620, kTol);
  EXPECT_NEAR(ps.p_joint[1][0], 0.07910, kTol);
  EXPECT_NEAR(ps.p_joint[1][1], 0.07950, kTol);
  EXPECT_NEAR(ps.p_t1[0], 0.84140, kTol);
  // P_t2 uses the a1 = 0 row of the PBS1-out table with its own total.
  EXPECT_NEAR(ps.p_t2[0], 8470.0 / 9999.0, kTol);
  EXPECT_NEAR(ps.p_t2[1], 1529.0 / 9999.0, kTol);
}

TEST(EstimateProbs, MissingAndDegenerateData) {
  ExperimentRecord rec = load_lab(45);
  try {
    estimate_probs(rec, EstimationMode::kStrict);
    FAIL() << "strict mode needs a (1,0) table";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingData);
  }
  rec.tables.erase(kDaOnly);
  try {
    estimate_probs(rec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingData);
  }
  rec = load_lab(45);
  rec.tables[kSequential].counts = {0, 0, 0, 0};
  try {
    estimate_probs(rec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateData);
  }
  rec = load_lab(45);
  rec.calibration[1] = 0;
  EXPECT_THROW(estimate_probs(rec), Error);
}

TEST(Analyze, LabCountsTheta45NegativityNearMaximum) {
  const auto r = analyze(load_lab(45));
  const double expect[4] = {0.591592354235424, 0.249807645764576, 0.255492354235423,
                            -0.096892354235424};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(r.quasi.w[k / 2][k % 2], expect[k], 1e-12);
  EXPECT_NEAR(r.quasi.negativity, 0.0968923542354, 1e-12);
  EXPECT_NEAR(r.quasi.negativity, 0.10, 0.01);
  // 0.103 lies inside the systematic error bar.
  EXPECT_LT(std::abs(r.quasi.negativity - 0.103),
            r.negativity_systematic + r.negativity_statistical);
  EXPECT_GT(r.negativity_statistical, 0.0);
}

TEST(Analyze, LabCountsTheta0And90ConsistentWithZero) {
  const auto r0 = analyze(load_lab(0));
  EXPECT_NEAR(r0.quasi.negativity, 0.0033005901180236, 1e-12);
  EXPECT_LT(r0.quasi.negativity, r0.negativity_statistical + r0.negativity_systematic);
  const auto r90 = analyze(load_lab(90));
  EXPECT_EQ(r90.quasi.negativity, 0.0);
  EXPECT_GT(r90.negativity_statistical, 0.0);
}

TEST(Analyze, IdealSimulationStatisticalErrorMatchesOracle) {
  const auto s = make_pure_state(kPi / 4, 0);
  ExperimentRecord rec;
  rec.add(simulate_counts(s, kSequential, 1'000'000, DetectorModel::ideal(), 41));
  rec.add(simulate_counts(s, kDaOnly, 1'000'000, DetectorModel::ideal(), 42));
  const auto r = analyze(rec);
  const double sigma = oracle::negativity_sigma_theta45(1e6);
  EXPECT_NEAR(r.quasi.negativity, 0.1036, 0.002);
  EXPECT_NEAR(r.quasi.negativity, kMaxNegativity, 4 * sigma);
  EXPECT_NEAR(r.negativity_statistical, sigma, 0.05 * sigma);
}

TEST(Analyze, ScaleInvariant) {
  const auto base = load_lab(45);
  ExperimentRecord scaled = base;
  for (auto& [setup, t] : scaled.tables) {
    for (auto& c : t.counts) c *= 7;
  }
  const auto a = analyze(base);
  const auto b = analyze(scaled);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(a.quasi.w[k / 2][k % 2], b.quasi.w[k / 2][k % 2], kTol);
  EXPECT_NEAR(a.quasi.negativity, b.quasi.negativity, kTol);
}

TEST(Analyze, CalibrationUndoesDetectorGains) {
  const auto base = load_lab(45);
  const std::array<std::uint64_t, 4> gain{3, 1, 5, 2};
  ExperimentRecord skewed = base;
  for (auto& [setup, t] : skewed.tables) {
    for (int d = 0; d < 4; ++d) t.counts[d] *= gain[d];
  }
  for (int d = 0; d < 4; ++d) skewed.calibration[d] = 1.0 / static_cast<double>(gain[d]);
  const auto a = analyze(base);
  const auto b = analyze(skewed);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(a.quasi.w[k / 2][k % 2], b.quasi.w[k / 2][k % 2], kTol);
  EXPECT_NEAR(a.quasi.negativity, b.quasi.negativity, kTol);
}

TEST(Calibration, FromEqualFluxReference) {
  const auto f = calibration_from_reference({kSequential, {100, 200, 400, 800}});
  EXPECT_DOUBLE_EQ(f[0], 3.75);
  EXPECT_DOUBLE_EQ(f[3], 375.0 / 800.0);
  EXPECT_THROW(calibration_from_reference({kSequential, {1, 0, 1, 1}}), Error);
}

TEST(DarkCorrection, ZeroIsIdentity) {
  const auto rec = load_lab(45);
  const auto out = dark_count_correction(rec, {0, 0, 0, 0});
  for (const auto& [setup, t] : rec.tables) EXPECT_EQ(out.tables.at(setup).counts, t.counts);
  EXPECT_FALSE(out.dark_clamped);
}

TEST(DarkCorrection, SubtractsOnActiveDetectorsAndClamps) {
  const auto rec = load_lab(45);
  const auto out = dark_count_correction(rec, {10, 20, 30, 900});
  const auto& seq = out.tables.at(kSequential);
  EXPECT_EQ(seq.at(0, 0), 4142u);
  EXPECT_EQ(seq.at(1, 1), 0u);  // 795 - 900 clamps
  EXPECT_TRUE(out.dark_clamped);
  const auto& da = out.tables.at(kDaOnly);
  EXPECT_EQ(da.at(0, 1), 1509u);
  EXPECT_EQ(da.at(1, 1), 1u);  // no light reaches D11 with PBS1 out
}

TEST(DarkCorrection, RaisesWeakFieldNegativity) {
  SourceModel src{.kind = SourceKind::kWeakCoherent};
  src.mean_photons_per_pulse = 6e-3;
  const DetectorModel det;
  ExperimentRecord rec;
  rec.add(weakfield_run(kPi / 4, 0, src, kSequential, 1'000'000, det, 51));
  rec.add(weakfield_run(kPi / 4, 0, src, kDaOnly, 1'000'000, det, 52));
  const auto dark = measure_dark_counts(src, 1'000'000, det, 53);
  const double before = analyze(rec).quasi.negativity;
  const double after = analyze(dark_count_correction(rec, dark)).quasi.negativity;
  EXPECT_GT(after, before);
}

TEST(ErrorBudget, CombinationRules) {
  const std::vector<ComponentError> one{{"APD", 0.05, 1}};
  EXPECT_DOUBLE_EQ(error_budget(one).total_error, 0.05);
  const std::vector<ComponentError> two{{"HWP", 0.011, 1}, {"APD", 0.05, 1}};
  EXPECT_NEAR(error_budget(two).total_error, std::sqrt(0.011 * 0.011 + 0.05 * 0.05), kTol);
  EXPECT_NEAR(error_budget(two).total_error, 0.0512, 5e-5);
  EXPECT_NEAR(error_budget(two, ErrorCombination::kSumOfRoots).total_error, 0.061, kTol);
  EXPECT_EQ(error_budget(std::vector<ComponentError>{}).total_error, 0.0);
  const std::vector<ComponentError> twice{{"PBS reflection", 0.05, 2}};
  EXPECT_NEAR(error_budget(twice).total_error, 0.05 * std::sqrt(2.0), kTol);
  const std::vector<ComponentError> bad{{"x", 1.0, 1}};
  EXPECT_THROW(error_budget(bad), Error);
}

TEST(ErrorBudget, DetectorPaths) {
  auto names = [](const std::vector<ComponentError>& v) {
    std::vector<std::string> n;
    for (const auto& c : v) n.push_back(c.name);
    return n;
  };
  EXPECT_EQ(names(path_components(kDaOnly, detector_index(0, 0))),
            (std::vector<std::string>{"HWP", "PBS transmission", "APD"}));
  EXPECT_EQ(names(path_components(kDaOnly, detector_index(0, 1))),
            (std::vector<std::string>{"HWP", "PBS reflection", "APD"}));
  EXPECT_EQ(names(path_components(kSequential, detector_index(1, 1))),
            (std::vector<std::string>{"PBS reflection", "HWP", "PBS reflection", "APD"}));
  EXPECT_THROW(path_components(kDaOnly, detector_index(1, 0)), Error);
  // With the transmission term negligible the D00 path is sqrt(HWP^2 + APD^2).
  const auto p = path_components(kDaOnly, detector_index(0, 0));
  EXPECT_NEAR(error_budget(p).total_error, 0.0512, 1e-4);
}

TEST(ErrorBudget, NegativityUsesTheNegativeCellPaths) {
  Grid2 w{{{0.6, 0.25}, {0.25, -0.1}}};
  const auto b = quantity_error_budget({QuantityKind::kNegativity, 0, 0}, w);
  const auto c = quantity_error_budget({QuantityKind::kWCell, 1, 1}, w);
  EXPECT_DOUBLE_EQ(b.total_error, c.total_error);
  for (const auto& comp : b.components) {
    EXPECT_GE(b.total_error, comp.relative_error);
  }
}

TEST(Report, JsonCarriesTheExpectedFields) {
  const auto json = report_to_json(analyze(load_lab(45)));
  for (const char* key : {"\"schema_version\"", "\"theta_deg\"", "\"phi_deg\"", "\"W\"",
                          "\"negativity\"", "\"nsit_dev\"", "\"aot_dev\"", "\"error\""}) {
    EXPECT_NE(json.find(key), std::string::npos) << key;
  }
}

}  // namespace
}  // namespace oqlab
