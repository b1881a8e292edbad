#include "mira/statistic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "mira/geometry.hpp"
#include "mira/ingestion.hpp"
#include "mira/resampling.hpp"

namespace mira {
namespace {

constexpr int kMaxRegionAttempts = 100;

}  // namespace

double mira_statistic(int k, std::int64_t n, std::int64_t N) {
  if (N < 0 || n < 0 || n > N) {
    throw invalid_argument("mira_statistic needs 0 <= n <= N (got n = " + std::to_string(n) +
                           ", N = " + std::to_string(N) + ")");
  }
  if (k != 0 && k != 1) throw invalid_argument("mira_statistic needs k in {0, 1}");
  const double denom = static_cast<double>(N + 2);
  return k == 1 ? static_cast<double>(n + 1) / denom : static_cast<double>(N - n + 1) / denom;
}

double TheoreticalBand::half_width(std::int64_t L) {
  if (L < 1) throw invalid_argument("theoretical band needs L >= 1");
  return std::sqrt(1.0 / (18.0 * static_cast<double>(L)));
}

double TheoreticalBand::finite_n_mean(std::int64_t N) {
  if (N < 0) throw invalid_argument("finite-N null mean needs N >= 0");
  const double n = static_cast<double>(N);
  return (2.0 * n + 3.0) / (3.0 * (n + 2.0));
}

std::int64_t countable_rows(std::size_t pool_size, const PoolMode& mode) {
  if (mode.kind == PoolMode::Kind::Exclusion) return static_cast<std::int64_t>(pool_size) - 1;
  return static_cast<std::int64_t>(pool_size) - static_cast<std::int64_t>(mode.reserved_count);
}

RegionReference select_region_reference(const SamplePool& pool, const PoolMode& mode,
                                        RandomStream& rng) {
  const std::size_t m = pool.size();
  if (m < 2) throw invalid_argument("region reference needs a pool of at least 2 rows");
  RegionReference ref;
  if (mode.kind == PoolMode::Kind::Exclusion) {
    const std::size_t r = rng.index(m);
    ref.y_r = pool.samples().row(r);
    ref.first_row = 0;
    ref.row_count = m;
    ref.excluded_row = r;
    return ref;
  }
  if (mode.reserved_count >= m) {
    throw invalid_argument("reserved count " + std::to_string(mode.reserved_count) +
                           " leaves no countable rows in a pool of " + std::to_string(m));
  }
  const std::size_t countable = m - mode.reserved_count;
  const std::size_t r = countable + rng.index(mode.reserved_count);
  ref.y_r = pool.samples().row(r);
  ref.first_row = 0;
  ref.row_count = countable;
  return ref;
}

namespace {

RegionOutcome score_region(const FiducialPair& fiducial, const SamplePool& pool,
                           const MiraConfig& config, RandomStream& rng) {
  const auto& spec = config.region_spec;
  const std::optional<std::span<const double>> x_star =
      fiducial.x_star.empty() ? std::nullopt
                              : std::optional<std::span<const double>>(fiducial.x_star);
  for (int attempt = 0; attempt < kMaxRegionAttempts; ++attempt) {
    const Vector center = sample_center(spec, x_star, pool.dim(), rng);
    const RegionReference ref = select_region_reference(pool, config.pool_mode, rng);
    try {
      const RegionCounts counts =
          region_counts(pool.samples(), ref.first_row, ref.row_count, fiducial.y_star, center,
                        ref.y_r, spec.metric, ref.excluded_row);
      return {counts.n, counts.k, mira_statistic(counts.k, counts.n, ref.n_eff())};
    } catch (const DegenerateRegionError&) {
      // Redraw both the center and the reference.
    }
  }
  throw DegenerateRegionError("fiducial " + std::to_string(fiducial.index) +
                              ": no non-degenerate region after " +
                              std::to_string(kMaxRegionAttempts) + " attempts");
}

void check_fiducial(const FiducialPair& fiducial, const SamplePool& pool,
                    const MiraConfig& config) {
  if (fiducial.y_star.size() != pool.dim()) {
    throw InputError(InputError::Kind::DimensionMismatch,
                     "fiducial " + std::to_string(fiducial.index) + ": y* has dimension " +
                         std::to_string(fiducial.y_star.size()) + " but the pool has " +
                         std::to_string(pool.dim()) + " columns");
  }
  if (countable_rows(pool.size(), config.pool_mode) < 1) {
    throw invalid_argument("fiducial " + std::to_string(fiducial.index) +
                           ": pool mode " + config.pool_mode.to_string() +
                           " leaves no countable rows in a pool of " +
                           std::to_string(pool.size()));
  }
}

template <class StreamFor>
FiducialScore score_fiducial_impl(const FiducialPair& fiducial, const SamplePool& pool,
                                  const MiraConfig& config, StreamFor&& stream_for) {
  config.region_spec.validate();
  check_fiducial(fiducial, pool, config);
  const auto regions = static_cast<std::size_t>(config.region_spec.regions_per_fiducial);
  FiducialScore result;
  result.outcomes.reserve(regions);
  double total = 0.0;
  for (std::size_t r = 0; r < regions; ++r) {
    const RegionOutcome outcome = score_region(fiducial, pool, config, stream_for(r));
    total += outcome.statistic;
    result.outcomes.push_back(outcome);
  }
  result.score = total / static_cast<double>(regions);
  return result;
}

}  // namespace

FiducialScore score_fiducial(const FiducialPair& fiducial, const SamplePool& pool,
                             const MiraConfig& config) {
  RandomStream stream(0);
  return score_fiducial_impl(fiducial, pool, config, [&](std::size_t r) -> RandomStream& {
    stream = derive_stream(config.seed, static_cast<std::uint64_t>(fiducial.index), r);
    return stream;
  });
}

FiducialScore score_fiducial(const FiducialPair& fiducial, const SamplePool& pool,
                             const MiraConfig& config, RandomStream& rng) {
  return score_fiducial_impl(fiducial, pool, config,
                             [&](std::size_t) -> RandomStream& { return rng; });
}

FiducialSource make_source(std::span<const FiducialEntry> entries) {
  return {entries.size(), [entries](std::size_t i) { return entries[i]; }};
}

namespace {

struct FiducialResult {
  FiducialScore score;
  std::int64_t n_eff = 0;
  std::size_t d_y = 0;
};

FiducialResult run_fiducial(const FiducialEntry& entry, const MiraConfig& config) {
  FiducialResult out;
  out.d_y = entry.pool.dim();
  out.n_eff = countable_rows(entry.pool.size(), config.pool_mode);
  if (!config.normalize) {
    out.score = score_fiducial(entry.fiducial, entry.pool, config);
    return out;
  }
  NormalizedFiducial norm = normalize_fiducial(entry.pool, entry.fiducial.y_star);
  FiducialPair fiducial = entry.fiducial;
  fiducial.y_star = std::move(norm.y_star);
  // x-dependent centers live in y-space, so x* follows the same map.
  if (std::holds_alternative<XDependentCenters>(config.region_spec.centers) &&
      fiducial.x_star.size() == out.d_y) {
    fiducial.x_star = norm.transform.apply(fiducial.x_star);
  }
  out.score = score_fiducial(fiducial, norm.pool, config);
  return out;
}

}  // namespace

ScoreReport mira_score(const FiducialSource& source, const MiraConfig& config, unsigned threads) {
  config.validate();
  const std::size_t L = source.size;
  if (L == 0) throw invalid_argument("mira_score needs at least one fiducial");

  std::vector<FiducialResult> results(L);
  std::vector<std::exception_ptr> errors(L);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < L; i = next++) {
      try {
        results[i] = run_fiducial(source.at(i), config);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(L)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  // Report the lowest-index failure so the message does not depend on scheduling.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  const std::size_t d_y = results.front().d_y;
  for (std::size_t i = 0; i < L; ++i) {
    if (results[i].d_y != d_y) {
      throw InputError(InputError::Kind::DimensionMismatch,
                       "fiducial " + std::to_string(i) + " has d_y = " +
                           std::to_string(results[i].d_y) + ", expected " + std::to_string(d_y));
    }
  }

  ScoreReport report;
  report.config_echo = config;
  report.per_fiducial_scores.reserve(L);
  report.n_eff = results.front().n_eff;
  std::vector<double> statistics;
  std::vector<RegionOutcome> all_outcomes;
  double total = 0.0;
  for (auto& r : results) {
    report.per_fiducial_scores.push_back(r.score.score);
    total += r.score.score;
    report.n_eff = std::min(report.n_eff, r.n_eff);
    if (config.compute_gof) {
      for (const auto& o : r.score.outcomes) statistics.push_back(o.statistic);
      all_outcomes.insert(all_outcomes.end(), r.score.outcomes.begin(), r.score.outcomes.end());
    }
    if (config.keep_outcomes) report.outcomes.push_back(std::move(r.score.outcomes));
  }
  // Every fiducial has the same region count, so the mean of per-fiducial
  // scores is the mean over all L * L_r region statistics.
  report.score = total / static_cast<double>(L);

  const auto L64 = static_cast<std::int64_t>(L);
  report.theoretical_mean_finite_n = TheoreticalBand::finite_n_mean(report.n_eff);
  report.band_center = TheoreticalBand::asymptotic_mean;
  report.band_half_width = TheoreticalBand::half_width(L64);
  report.diagnosis = diagnose(report.score, L64, config.diagnosis_z);

  if (config.bootstrap_iterations >= 2) {
    RandomStream rng = derive_stream(config.seed, 0, 0, StreamPurpose::Bootstrap);
    const BootstrapResult boot =
        bootstrap_score(report.per_fiducial_scores, config.bootstrap_iterations, rng);
    report.bootstrap_mean = boot.mean;
    report.bootstrap_std = boot.std;
  }
  if (config.compute_gof) {
    report.gof = beta21_gof(statistics);
    const std::vector<double> q = sufficiency_statistics(all_outcomes);
    if (!q.empty()) report.gof_sufficiency = beta21_gof(q);
  }
  return report;
}

ScoreReport mira_score(std::span<const FiducialEntry> entries, const MiraConfig& config,
                       unsigned threads) {
  return mira_score(make_source(entries), config, threads);
}

std::vector<double> sufficiency_statistics(std::span<const RegionOutcome> outcomes) {
  std::vector<double> q;
  for (const auto& o : outcomes) {
    if (o.k == 1) q.push_back(o.statistic);
  }
  return q;
}

GofResult beta21_gof(std::span<const double> values) {
  if (values.empty()) throw invalid_argument("goodness of fit needs at least one value");
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw invalid_argument("goodness-of-fit value " + std::to_string(v) + " is outside [0, 1]");
    }
  }
  std::sort(sorted.begin(), sorted.end());
  const double m = static_cast<double>(sorted.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = sorted[i] * sorted[i];
    const double above = static_cast<double>(i + 1) / m - cdf;
    const double below = cdf - static_cast<double>(i) / m;
    ks = std::max({ks, above, below});
  }
  return {ks, static_cast<std::int64_t>(sorted.size())};
}

Diagnosis diagnose(double score, std::int64_t L, double z) {
  if (!(z > 0.0)) throw invalid_argument("diagnosis needs z > 0");
  const double half = z * TheoreticalBand::half_width(L);
  const double offset = score - TheoreticalBand::asymptotic_mean;
  if (std::abs(offset) <= half) return Diagnosis::ConsistentWithNull;
  return offset < 0.0 ? Diagnosis::Overconfident : Diagnosis::Underconfident;
}

}  // namespace mira
