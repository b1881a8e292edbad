#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "mira/errors.hpp"
#include "mira/statistic.hpp"
#include "mira/synthetic.hpp"
#include "test_helpers.hpp"

namespace mira {
namespace {

// Exact E[P_N] under the null: n uniform on {0..N}, k | n ~ Bernoulli((n+1)/(N+2)).
double enumerated_null_mean(std::int64_t N) {
  double total = 0.0;
  for (std::int64_t n = 0; n <= N; ++n) {
    const double p_in = static_cast<double>(n + 1) / static_cast<double>(N + 2);
    total += p_in * mira_statistic(1, n, N) + (1.0 - p_in) * mira_statistic(0, n, N);
  }
  return total / static_cast<double>(N + 1);
}

std::vector<FiducialEntry> materialize(const FiducialSource& source) {
  std::vector<FiducialEntry> out;
  out.reserve(source.size);
  for (std::size_t i = 0; i < source.size; ++i) out.push_back(source.at(i));
  return out;
}

// Null region outcomes: candidate and truth both N(0,1) in one dimension.
std::vector<RegionOutcome> null_outcomes(std::int64_t L, std::int64_t regions, std::int64_t N,
                                         std::uint64_t seed) {
  const auto data = synthetic::gen_disjoint({L, N, 0.0, 1, seed});
  MiraConfig config;
  config.region_spec.regions_per_fiducial = regions;
  config.seed = seed;
  config.bootstrap_iterations = 0;
  config.compute_gof = false;
  config.keep_outcomes = true;
  const ScoreReport report = mira_score(data.source, config);
  std::vector<RegionOutcome> all;
  for (const auto& f : report.outcomes) all.insert(all.end(), f.begin(), f.end());
  return all;
}

TEST(MiraStatistic, KnownValues) {
  EXPECT_DOUBLE_EQ(mira_statistic(1, 3, 8), 0.4);
  EXPECT_DOUBLE_EQ(mira_statistic(0, 0, 0), 0.5);
  EXPECT_DOUBLE_EQ(mira_statistic(1, 10, 10), 11.0 / 12.0);
  EXPECT_DOUBLE_EQ(mira_statistic(0, 3, 8), 0.6);
}

TEST(MiraStatistic, Errors) {
  EXPECT_THROW(mira_statistic(1, -1, 5), InputError);
  EXPECT_THROW(mira_statistic(1, 6, 5), InputError);
  EXPECT_THROW(mira_statistic(2, 1, 5), InputError);
}

TEST(MiraStatistic, AlwaysInsideOpenUnitInterval) {
  for (std::int64_t N = 0; N <= 60; ++N) {
    for (std::int64_t n = 0; n <= N; ++n) {
      for (int k : {0, 1}) {
        const double p = mira_statistic(k, n, N);
        ASSERT_GT(p, 0.0);
        ASSERT_LT(p, 1.0);
      }
    }
  }
}

TEST(NullMean, ExhaustiveEnumerationMatchesClosedForm) {
  for (std::int64_t N : {0, 1, 2, 5, 10, 100}) {
    const double closed = (2.0 * N + 3.0) / (3.0 * (N + 2.0));
    EXPECT_NEAR(enumerated_null_mean(N), closed, 1e-12) << "N = " << N;
    EXPECT_NEAR(TheoreticalBand::finite_n_mean(N), closed, 1e-15);
  }
}

TEST(TheoreticalBand, FiniteNMeanIncreasesToTwoThirds) {
  EXPECT_DOUBLE_EQ(TheoreticalBand::finite_n_mean(0), 0.5);
  for (std::int64_t N = 0; N < 2000; ++N) {
    ASSERT_LT(TheoreticalBand::finite_n_mean(N), TheoreticalBand::finite_n_mean(N + 1));
    ASSERT_LT(TheoreticalBand::finite_n_mean(N), 2.0 / 3.0);
  }
  EXPECT_NEAR(TheoreticalBand::finite_n_mean(100000000), 2.0 / 3.0, 1e-8);
  EXPECT_NEAR(TheoreticalBand::half_width(1000), std::sqrt(1.0 / 18000.0), 1e-15);
  EXPECT_THROW(TheoreticalBand::half_width(0), InputError);
}

TEST(SelectRegionReference, Exclusion) {
  SampleMatrix m(500, 1);
  for (std::size_t i = 0; i < 500; ++i) m(i, 0) = static_cast<double>(i);
  const SamplePool pool(m, 0);
  RandomStream rng(1);
  for (int t = 0; t < 100; ++t) {
    const auto ref = select_region_reference(pool, PoolMode::exclusion(), rng);
    EXPECT_EQ(ref.n_eff(), 499);
    ASSERT_TRUE(ref.excluded_row.has_value());
    EXPECT_EQ(ref.y_r[0], static_cast<double>(*ref.excluded_row));
  }
  const SamplePool two(SampleMatrix(2, 1, {0.0, 1.0}), 0);
  EXPECT_EQ(select_region_reference(two, PoolMode::exclusion(), rng).n_eff(), 1);
}

TEST(SelectRegionReference, Reserved) {
  SampleMatrix m(600, 1);
  for (std::size_t i = 0; i < 600; ++i) m(i, 0) = static_cast<double>(i);
  const SamplePool pool(m, 0);
  RandomStream rng(2);
  for (int t = 0; t < 100; ++t) {
    const auto ref = select_region_reference(pool, PoolMode::reserved(100), rng);
    EXPECT_EQ(ref.n_eff(), 500);
    EXPECT_FALSE(ref.excluded_row.has_value());
    EXPECT_GE(ref.y_r[0], 500.0);
  }
  EXPECT_THROW(select_region_reference(pool, PoolMode::reserved(600), rng), InputError);
  EXPECT_EQ(countable_rows(600, PoolMode::reserved(100)), 500);
  EXPECT_EQ(countable_rows(600, PoolMode::exclusion()), 599);
}

TEST(ScoreFiducial, NullMatchesFiniteNMean) {
  MiraConfig config;
  config.region_spec.regions_per_fiducial = 10000;
  config.region_spec.centers = CenterLaw::normal(0, 1);
  // Regions of one fiducial share y*, whose position moves that fiducial's
  // score by ~0.04, so the expectation is taken over fiducials too.
  double total = 0.0;
  const int reps = 150;
  for (int s = 0; s < reps; ++s) {
    const auto e = synthetic::gen_disjoint({1, 500, 0.0, 1, static_cast<std::uint64_t>(s)})
                       .source.at(0);
    ASSERT_EQ(e.pool.size(), 500u);
    config.seed = static_cast<std::uint64_t>(s);
    total += score_fiducial(e.fiducial, e.pool, config).score;
  }
  EXPECT_NEAR(total / reps, 1001.0 / 1503.0, 0.01);
}

TEST(ScoreFiducial, DisjointSupportApproachesOneHalf) {
  SampleMatrix m(500, 1);
  RandomStream rng(4);
  for (std::size_t i = 0; i < 500; ++i) m(i, 0) = rng.normal();
  const SamplePool pool(m, 0);
  const FiducialPair fid{{}, {100.0}, 0};
  MiraConfig config;
  config.region_spec.centers = CenterLaw::normal(0, 1);
  config.region_spec.regions_per_fiducial = 1000;
  EXPECT_LE(score_fiducial(fid, pool, config).score, 0.51);
}

TEST(ScoreFiducial, SingleRegionEqualsItsStatistic) {
  const auto e = synthetic::gen_disjoint({1, 50, 0.0, 2, 5}).source.at(0);
  MiraConfig config;
  config.region_spec.regions_per_fiducial = 1;
  config.region_spec.centers = CenterLaw::normal(0, 1);
  const auto fs = score_fiducial(e.fiducial, e.pool, config);
  ASSERT_EQ(fs.outcomes.size(), 1u);
  EXPECT_EQ(fs.score, fs.outcomes[0].statistic);
  EXPECT_EQ(fs.outcomes[0].statistic,
            mira_statistic(fs.outcomes[0].k, fs.outcomes[0].n, 49));
}

TEST(ScoreFiducial, DegeneratePoolErrors) {
  const SamplePool pool(SampleMatrix(5, 2, std::vector<double>(10, 0.0)), 0);
  const FiducialPair fid{{}, {1.0, 1.0}, 0};
  MiraConfig config;
  config.region_spec.metric = Metric::cosine();
  EXPECT_THROW(score_fiducial(fid, pool, config), DegenerateRegionError);
}

TEST(ScoreFiducial, DimensionMismatchErrors) {
  const SamplePool pool(SampleMatrix(5, 2, std::vector<double>(10, 0.5)), 0);
  const FiducialPair fid{{}, {1.0}, 0};
  EXPECT_THROW(score_fiducial(fid, pool, MiraConfig{}), InputError);
}

TEST(MiraScore, EmptyInputErrors) {
  EXPECT_THROW(mira_score(std::span<const FiducialEntry>{}, MiraConfig{}), InputError);
}

TEST(MiraScore, ReportFields) {
  const auto entries = materialize(synthetic::gen_disjoint({50, 100, 0.0, 2, 6}).source);
  MiraConfig config;
  config.region_spec.regions_per_fiducial = 20;
  config.keep_outcomes = true;
  const ScoreReport r = mira_score(entries, config);
  ASSERT_EQ(r.per_fiducial_scores.size(), 50u);
  EXPECT_NEAR(r.score, testing::mean(r.per_fiducial_scores), 1e-12);
  EXPECT_EQ(r.n_eff, 99);
  EXPECT_DOUBLE_EQ(r.theoretical_mean_finite_n, TheoreticalBand::finite_n_mean(99));
  EXPECT_DOUBLE_EQ(r.band_center, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.band_half_width, TheoreticalBand::half_width(50));
  ASSERT_TRUE(r.bootstrap_std.has_value());
  ASSERT_TRUE(r.gof.has_value());
  EXPECT_EQ(r.gof->n_samples, 1000);
  ASSERT_EQ(r.outcomes.size(), 50u);
  EXPECT_EQ(r.config_echo, config);
  for (double s : r.per_fiducial_scores) {
    EXPECT_GE(s, 1.0 / 101.0);
    EXPECT_LE(s, 100.0 / 101.0);
  }
}

TEST(MiraScore, InconsistentOutputDimensionErrors) {
  auto entries = materialize(synthetic::gen_disjoint({2, 20, 0.0, 2, 7}).source);
  entries[1] = synthetic::gen_disjoint({2, 20, 0.0, 3, 7}).source.at(1);
  EXPECT_THROW(mira_score(entries, MiraConfig{}), InputError);
}

TEST(MiraScoreProperty, ThreadCountDoesNotChangeTheReport) {
  const auto data = synthetic::gen_gaussian_toy({synthetic::ToyMode::Overconfident, 40, 100, 9});
  MiraConfig config;
  config.region_spec.regions_per_fiducial = 20;
  config.seed = 9;
  const ScoreReport one = mira_score(data.source, config, 1);
  for (unsigned t : {2u, 3u, 8u}) EXPECT_EQ(mira_score(data.source, config, t), one);
}

TEST(MiraScoreProperty, FiducialPermutationInvariance) {
  auto entries = materialize(synthetic::gen_gaussian_toy({synthetic::ToyMode::Correct, 60, 80, 11}).source);
  MiraConfig config;
  config.region_spec.regions_per_fiducial = 30;
  config.seed = 11;
  config.bootstrap_iterations = 0;
  const ScoreReport base = mira_score(entries, config);

  RandomStream rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<FiducialEntry> shuffled = entries;
    for (std::size_t i = shuffled.size() - 1; i > 0; --i) {
      std::swap(shuffled[i], shuffled[rng.index(i + 1)]);
    }
    const ScoreReport perm = mira_score(shuffled, config);
    EXPECT_NEAR(perm.score, base.score, 1e-12);
    for (std::size_t i = 0; i < shuffled.size(); ++i) {
      const auto idx = static_cast<std::size_t>(shuffled[i].fiducial.index);
      EXPECT_EQ(perm.per_fiducial_scores[i], base.per_fiducial_scores[idx]);
    }
  }
}

TEST(MiraScoreProperty, RowPermutationInvarianceInDistribution) {
  auto entries = materialize(synthetic::gen_gaussian_toy({synthetic::ToyMode::Correct, 300, 200, 13}).source);
  MiraConfig config;
  config.region_spec.regions_per_fiducial = 50;
  config.seed = 13;
  const ScoreReport base = mira_score(entries, config);

  RandomStream rng(14);
  for (auto& e : entries) {
    const SampleMatrix& m = e.pool.samples();
    std::vector<std::size_t> order(m.rows());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[rng.index(i + 1)]);
    SampleMatrix p(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < m.cols(); ++c) p(r, c) = m(order[r], c);
    }
    e.pool = SamplePool(std::move(p), e.fiducial.index);
  }
  const ScoreReport perm = mira_score(entries, config);
  EXPECT_LE(std::abs(perm.score - base.score), 2.0 * *base.bootstrap_std);
}

TEST(MiraScoreProperty, LowerBoundOnMisspecifiedInputs) {
  RandomStream rng(15);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t d = 1 + rng.index(4);
    const double shift = rng.uniform(0.0, 20.0);
    const double scale = std::exp(rng.uniform(-3.0, 3.0));
    std::vector<FiducialEntry> entries;
    for (std::int64_t i = 0; i < 100; ++i) {
      FiducialEntry e;
      e.fiducial.index = i;
      e.fiducial.y_star.resize(d);
      for (auto& v : e.fiducial.y_star) v = rng.normal();
      SampleMatrix m(200, d);
      for (std::size_t r = 0; r < 200; ++r) {
        for (std::size_t c = 0; c < d; ++c) m(r, c) = shift + scale * rng.normal();
      }
      e.pool = SamplePool(std::move(m), i);
      entries.push_back(std::move(e));
    }
    MiraConfig config;
    config.region_spec.regions_per_fiducial = 30;
    config.seed = static_cast<std::uint64_t>(trial);
    const ScoreReport r = mira_score(entries, config);
    EXPECT_GE(r.score, 0.5 - 3.0 * *r.bootstrap_std)
        << "shift " << shift << " scale " << scale << " d " << d;
  }
}

TEST(Sufficiency, FiltersInsideRegions) {
  const std::vector<RegionOutcome> none{{1, 0, 0.3}, {2, 0, 0.2}};
  EXPECT_TRUE(sufficiency_statistics(none).empty());
  const std::vector<RegionOutcome> some{{3, 1, 0.4}, {2, 0, 0.5}, {8, 1, 0.9}};
  EXPECT_EQ(sufficiency_statistics(some), (std::vector<double>{0.4, 0.9}));
}

TEST(Beta21Gof, ExactQuantiles) {
  for (int m : {10, 100, 1000}) {
    std::vector<double> v;
    for (int i = 1; i <= m; ++i) v.push_back(std::sqrt(static_cast<double>(i) / m));
    const GofResult g = beta21_gof(v);
    EXPECT_LE(g.ks_statistic, 1.0 / m + 1e-12);
    EXPECT_EQ(g.n_samples, m);
  }
}

TEST(Beta21Gof, UniformSampleApproachesOneQuarter) {
  std::vector<double> v;
  const int m = 100000;
  for (int i = 0; i < m; ++i) v.push_back((i + 0.5) / m);
  EXPECT_NEAR(beta21_gof(v).ks_statistic, 0.25, 1e-4);
}

TEST(Beta21Gof, Errors) {
  EXPECT_THROW(beta21_gof(std::vector<double>{0.5, 1.5}), InputError);
  EXPECT_THROW(beta21_gof(std::vector<double>{-0.1}), InputError);
  EXPECT_THROW(beta21_gof(std::vector<double>{}), InputError);
}

// Independent KS against x^2, written without sharing code with beta21_gof.
double ks_against_square(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  double d = 0.0;
  const double m = static_cast<double>(v.size());
  std::size_t i = 0;
  while (i < v.size()) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    const double f = v[i] * v[i];
    d = std::max({d, std::abs(static_cast<double>(j) / m - f), std::abs(static_cast<double>(i) / m - f)});
    i = j;
  }
  return d;
}

TEST(Beta21Gof, MatchesIndependentKsWithTies) {
  RandomStream rng(16);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> v(500);
    for (auto& x : v) x = static_cast<double>(rng.index(11)) / 10.0;
    EXPECT_NEAR(beta21_gof(v).ks_statistic, ks_against_square(v), 1e-12);
  }
}

TEST(Diagnose, Examples) {
  EXPECT_EQ(diagnose(0.6144, 1000), Diagnosis::Overconfident);
  EXPECT_EQ(diagnose(0.6937, 1000), Diagnosis::Underconfident);
  for (std::int64_t L : {1, 10, 1000, 1000000}) {
    EXPECT_EQ(diagnose(2.0 / 3.0, L), Diagnosis::ConsistentWithNull);
  }
  // z widens the band.
  EXPECT_EQ(diagnose(0.6144, 1000, 10.0), Diagnosis::ConsistentWithNull);
}

// Null law: P_N ~ Beta(2,1), variance 1/18, P(k=1) = 1/2, q ~ Beta(2,1).
class NullLaw : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { outcomes_ = new std::vector<RegionOutcome>(null_outcomes(10000, 10, 5000, 2024)); }
  static void TearDownTestSuite() {
    delete outcomes_;
    outcomes_ = nullptr;
  }
  static std::vector<RegionOutcome>* outcomes_;
};

std::vector<RegionOutcome>* NullLaw::outcomes_ = nullptr;

TEST_F(NullLaw, StatisticFollowsBeta21) {
  std::vector<double> p;
  for (const auto& o : *outcomes_) p.push_back(o.statistic);
  ASSERT_EQ(p.size(), 100000u);
  EXPECT_LE(beta21_gof(p).ks_statistic, 0.02);
  EXPECT_NEAR(testing::sample_variance(p), 1.0 / 18.0, 0.003);
}

TEST_F(NullLaw, HalfTheRegionsContainTheTruth) {
  std::size_t inside = 0;
  for (const auto& o : *outcomes_) inside += o.k;
  EXPECT_NEAR(static_cast<double>(inside) / outcomes_->size(), 0.5, 0.01);
}

TEST_F(NullLaw, SufficiencyStatistics) {
  const auto q = sufficiency_statistics(*outcomes_);
  const double N = 4999.0;
  EXPECT_NEAR(testing::mean(q), (2.0 / 3.0) * (N + 1.5) / (N + 2.0), 0.005);
  EXPECT_LE(beta21_gof(q).ks_statistic, 0.03);
}

}  // namespace
}  // namespace mira
