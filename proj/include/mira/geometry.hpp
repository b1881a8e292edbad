#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "mira/rng.hpp"
#include "mira/types.hpp"

namespace mira {

/// Distance between two vectors of equal dimension. Cosine is the
/// dissimilarity 1 - cos(a, b): zero for colinear same-direction vectors,
/// so it is not a metric in the strict sense.
///
/// Throws InputError on dimension mismatch or, for Cosine, a zero vector.
double distance(const Metric& metric, std::span<const double> a, std::span<const double> b);

/// Monotone surrogate of distance() used for counting. It orders pairs the
/// same way as the distance but skips the final root (L2, Minkowski) and
/// returns NaN instead of throwing for a zero vector under Cosine.
double distance_key(const Metric& metric, std::span<const double> a, std::span<const double> b);

/// Draws one region center. In XDependent mode `x_star` must be present
/// and have dimension d_y.
Vector sample_center(const RegionSpec& spec, std::optional<std::span<const double>> x_star,
                     std::size_t d_y, RandomStream& rng);

struct RegionCounts {
  std::int64_t n = 0;
  int k = 0;

  bool operator==(const RegionCounts&) const = default;
};

/// Counts pool rows inside the ball centered at `center` whose radius is
/// d(y_r, center), and whether y* lies in that ball. The boundary is
/// inclusive. `skip_row`, when set, names a row of `pool` that is left out
/// of the count (the region reference when it was taken from the pool).
///
/// Throws DegenerateRegionError if the radius is zero or undefined.
RegionCounts region_counts(const SampleMatrix& pool, std::span<const double> y_star,
                           std::span<const double> center, std::span<const double> y_r,
                           const Metric& metric,
                           std::optional<std::size_t> skip_row = std::nullopt);

/// Same as region_counts restricted to rows [first, first + count).
RegionCounts region_counts(const SampleMatrix& pool, std::size_t first, std::size_t count,
                           std::span<const double> y_star, std::span<const double> center,
                           std::span<const double> y_r, const Metric& metric,
                           std::optional<std::size_t> skip_row = std::nullopt);

}  // namespace mira
