#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "mira/errors.hpp"
#include "mira/resampling.hpp"
#include "mira/statistic.hpp"
#include "mira/synthetic.hpp"
#include "test_helpers.hpp"

namespace mira {
namespace {

TEST(Bootstrap, ConstantScoresHaveZeroStd) {
  const std::vector<double> scores(100, 0.6);
  RandomStream rng(1);
  const auto r = bootstrap_score(scores, 200, rng);
  EXPECT_EQ(r.std, 0.0);
  EXPECT_EQ(r.mean, 0.6);
  EXPECT_EQ(r.B, 200);
  ASSERT_EQ(r.means.size(), 200u);
}

TEST(Bootstrap, SingleFiducial) {
  const std::vector<double> scores{0.71};
  RandomStream rng(2);
  const auto r = bootstrap_score(scores, 50, rng);
  for (double m : r.means) EXPECT_EQ(m, 0.71);
  EXPECT_EQ(r.std, 0.0);
}

TEST(Bootstrap, Errors) {
  RandomStream rng(3);
  EXPECT_THROW(bootstrap_score(std::vector<double>{}, 10, rng), InputError);
  EXPECT_THROW(bootstrap_score(std::vector<double>{0.5, 0.6}, 1, rng), InputError);
  EXPECT_THROW(bootstrap_score(std::vector<double>{0.5, 0.6}, 0, rng), InputError);
}

TEST(Bootstrap, DeterministicGivenSeed) {
  std::vector<double> scores(300);
  RandomStream src(4);
  for (auto& s : scores) s = src.uniform();
  RandomStream a(99), b(99);
  EXPECT_EQ(bootstrap_score(scores, 100, a).means, bootstrap_score(scores, 100, b).means);
}

TEST(Bootstrap, StdIsSampleStdOfMeans) {
  std::vector<double> scores(50);
  RandomStream src(5);
  for (auto& s : scores) s = src.uniform();
  RandomStream rng(6);
  const auto r = bootstrap_score(scores, 40, rng);
  EXPECT_NEAR(r.mean, testing::mean(r.means), 1e-15);
  EXPECT_NEAR(r.std, std::sqrt(testing::sample_variance(r.means)), 1e-15);
}

// For i.i.d. scores the bootstrap std approaches sd / sqrt(L).
TEST(BootstrapProperty, StdMatchesAnalyticStandardError) {
  const std::size_t L = 2000;
  std::vector<double> scores(L);
  RandomStream src(7);
  for (auto& s : scores) s = src.uniform();
  RandomStream rng(8);
  const auto r = bootstrap_score(scores, 2000, rng);
  const double se = std::sqrt(testing::sample_variance(scores) / static_cast<double>(L));
  EXPECT_NEAR(r.std / se, 1.0, 0.06);
}

TEST(BootstrapProperty, MeanConvergesToPointScore) {
  RandomStream src(9);
  for (std::int64_t B : {50, 200, 1000, 5000}) {
    std::vector<double> scores(500);
    for (auto& s : scores) s = src.beta(2.0, 1.0);
    RandomStream rng(static_cast<std::uint64_t>(B));
    const auto r = bootstrap_score(scores, B, rng);
    EXPECT_LE(std::abs(r.mean - testing::mean(scores)), 3.0 * r.std / std::sqrt(static_cast<double>(B)))
        << "B = " << B;
  }
}

// Replication oracle: the bootstrap std tracks the spread of the score over
// independent repetitions of the whole experiment.
TEST(BootstrapProperty, ReplicationOracleOnNullToy) {
  MiraConfig config;
  config.bootstrap_iterations = 200;
  config.compute_gof = false;
  std::vector<double> replicate_scores;
  double bootstrap_std = 0.0;
  for (std::uint64_t rep = 0; rep < 50; ++rep) {
    const auto data = synthetic::gen_gaussian_toy({synthetic::ToyMode::Correct, 1000, 500, 1000 + rep});
    config.seed = 1000 + rep;
    const ScoreReport r = mira_score(data.source, config);
    replicate_scores.push_back(r.score);
    if (rep == 0) bootstrap_std = *r.bootstrap_std;
  }
  const double oracle = std::sqrt(testing::sample_variance(replicate_scores));
  EXPECT_GE(bootstrap_std, 0.5 * oracle);
  EXPECT_LE(bootstrap_std, 2.0 * oracle);
}

// With one region per fiducial each score is a single P_N with variance 1/18.
TEST(BootstrapProperty, SingleRegionNullMatchesTheoreticalBand) {
  const auto data = synthetic::gen_gaussian_toy({synthetic::ToyMode::Correct, 1000, 500, 21});
  MiraConfig config;
  config.region_spec.regions_per_fiducial = 1;
  config.seed = 21;
  const ScoreReport r = mira_score(data.source, config);
  const double w = std::sqrt(1.0 / 18000.0);
  EXPECT_GE(*r.bootstrap_std, 0.5 * w);
  EXPECT_LE(*r.bootstrap_std, 2.0 * w);
}

}  // namespace
}  // namespace mira
