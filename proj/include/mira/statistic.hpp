#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mira/rng.hpp"
#include "mira/types.hpp"

namespace mira {

/// Laplace's rule of succession read as p(k | n): (n+1)/(N+2) when y* falls
/// in the region, (N-n+1)/(N+2) otherwise.
double mira_statistic(int k, std::int64_t n, std::int64_t N);

/// Reference values of the score under the null hypothesis.
struct TheoreticalBand {
  static constexpr double asymptotic_mean = 2.0 / 3.0;
  static constexpr double asymptotic_variance = 1.0 / 18.0;
  static constexpr double lower_bound = 0.5;

  /// sqrt(1 / (18 L)), the one-sigma spread of a mean over L fiducials.
  static double half_width(std::int64_t L);
  /// Exact null mean at finite N: (2N+3) / (3(N+2)).
  static double finite_n_mean(std::int64_t N);
};

/// The region reference and the rows it is counted against. Rows are a
/// contiguous range of the pool, minus `excluded_row` when set.
struct RegionReference {
  std::span<const double> y_r;
  std::size_t first_row = 0;
  std::size_t row_count = 0;
  std::optional<std::size_t> excluded_row;

  std::int64_t n_eff() const noexcept {
    return static_cast<std::int64_t>(row_count) - (excluded_row ? 1 : 0);
  }
};

/// Number of countable rows a pool of `pool_size` rows provides under `mode`.
std::int64_t countable_rows(std::size_t pool_size, const PoolMode& mode);

/// Exclusion: y_r is a uniformly chosen pool row, the other rows are counted.
/// Reserved(K): y_r is drawn from the last K rows, the first M-K are counted.
RegionReference select_region_reference(const SamplePool& pool, const PoolMode& mode,
                                        RandomStream& rng);

struct FiducialScore {
  double score = 0.0;
  std::vector<RegionOutcome> outcomes;
};

/// Scores one fiducial over config.region_spec.regions_per_fiducial regions.
/// The pool is used as given; normalization is the caller's job (mira_score
/// handles it). Each region draws from derive_stream(seed, fiducial, region).
FiducialScore score_fiducial(const FiducialPair& fiducial, const SamplePool& pool,
                             const MiraConfig& config);

/// Same as above but draws every region from the single stream `rng`.
FiducialScore score_fiducial(const FiducialPair& fiducial, const SamplePool& pool,
                             const MiraConfig& config, RandomStream& rng);

/// Random-access supply of fiducials. Entries are produced on demand so that
/// large synthetic experiments never hold every pool in memory at once.
struct FiducialSource {
  std::size_t size = 0;
  std::function<FiducialEntry(std::size_t)> at;
};

FiducialSource make_source(std::span<const FiducialEntry> entries);

/// Full Monte Carlo score with theoretical band, bootstrap, diagnosis and
/// goodness of fit. The result does not depend on `threads`.
ScoreReport mira_score(const FiducialSource& source, const MiraConfig& config,
                       unsigned threads = 1);
ScoreReport mira_score(std::span<const FiducialEntry> entries, const MiraConfig& config,
                       unsigned threads = 1);

/// The q values (n+1)/(N+2) of the regions that contain y*.
std::vector<double> sufficiency_statistics(std::span<const RegionOutcome> outcomes);

/// One-sample KS statistic against F(x) = x^2 on [0, 1].
GofResult beta21_gof(std::span<const double> values);

/// Places a score relative to 2/3 +- z sqrt(1/(18L)). Below the band points
/// at overconfidence or bias; above it at underconfidence.
Diagnosis diagnose(double score, std::int64_t L, double z = 3.0);

}  // namespace mira
