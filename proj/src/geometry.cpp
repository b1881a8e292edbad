#include "mira/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mira {
namespace {

void check_same_dim(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InputError(InputError::Kind::DimensionMismatch,
                     "distance between vectors of dimension " + std::to_string(a.size()) +
                         " and " + std::to_string(b.size()));
  }
}

// Four partial sums so the compiler can vectorize without reassociation flags.
double squared_l2(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const double d0 = a[i] - b[i];
    const double d1 = a[i + 1] - b[i + 1];
    const double d2 = a[i + 2] - b[i + 2];
    const double d3 = a[i + 3] - b[i + 3];
    s0 += d0 * d0;
    s1 += d1 * d1;
    s2 += d2 * d2;
    s3 += d3 * d3;
  }
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s0 += d * d;
  }
  return (s0 + s1) + (s2 + s3);
}

double l1(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

double chebyshev(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double powered_minkowski(std::span<const double> a, std::span<const double> b, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::pow(std::abs(a[i] - b[i]), p);
  return s;
}

double norm(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

// 1 - cos for a precomputed norm of `b`; NaN when either norm is zero.
double cosine_key(std::span<const double> a, std::span<const double> b, double norm_b) {
  double dot = 0.0, aa = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    aa += a[i] * a[i];
  }
  if (aa == 0.0 || norm_b == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return std::max(0.0, 1.0 - dot / (std::sqrt(aa) * norm_b));
}

template <class Key>
RegionCounts count_with(const SampleMatrix& pool, std::size_t first, std::size_t count,
                        std::span<const double> y_star, std::span<const double> y_r,
                        std::optional<std::size_t> skip_row, Key key) {
  const double radius = key(y_r);
  if (!(radius > 0.0)) {
    throw DegenerateRegionError("region radius is zero or undefined (reference on the center)");
  }
  std::int64_t n = 0;
  const std::size_t last = first + count;
  for (std::size_t j = first; j < last; ++j) {
    if (key(pool.row(j)) <= radius) ++n;
  }
  if (skip_row && *skip_row >= first && *skip_row < last && key(pool.row(*skip_row)) <= radius) {
    --n;
  }
  // NaN keys compare false, so undefined cosine distances never count as inside.
  const int k = key(y_star) <= radius ? 1 : 0;
  return {n, k};
}

}  // namespace

double distance(const Metric& metric, std::span<const double> a, std::span<const double> b) {
  check_same_dim(a, b);
  switch (metric.kind) {
    case Metric::Kind::L2: return std::sqrt(squared_l2(a, b));
    case Metric::Kind::L1: return l1(a, b);
    case Metric::Kind::Chebyshev: return chebyshev(a, b);
    case Metric::Kind::Minkowski: return std::pow(powered_minkowski(a, b, metric.p), 1.0 / metric.p);
    case Metric::Kind::Cosine: {
      const double nb = norm(b);
      const double d = cosine_key(a, b, nb);
      if (std::isnan(d)) throw invalid_argument("cosine distance is undefined for a zero vector");
      return d;
    }
  }
  return 0.0;
}

double distance_key(const Metric& metric, std::span<const double> a, std::span<const double> b) {
  check_same_dim(a, b);
  switch (metric.kind) {
    case Metric::Kind::L2: return squared_l2(a, b);
    case Metric::Kind::L1: return l1(a, b);
    case Metric::Kind::Chebyshev: return chebyshev(a, b);
    case Metric::Kind::Minkowski: return powered_minkowski(a, b, metric.p);
    case Metric::Kind::Cosine: return cosine_key(a, b, norm(b));
  }
  return 0.0;
}

Vector sample_center(const RegionSpec& spec, std::optional<std::span<const double>> x_star,
                     std::size_t d_y, RandomStream& rng) {
  Vector c(d_y);
  if (const auto* law = std::get_if<CenterLaw>(&spec.centers)) {
    for (auto& v : c) {
      switch (law->kind) {
        case CenterLaw::Kind::Uniform: v = rng.uniform(law->a, law->b); break;
        case CenterLaw::Kind::Normal: v = rng.normal(law->a, law->b); break;
        case CenterLaw::Kind::Beta: v = rng.beta(law->a, law->b); break;
      }
    }
    return c;
  }
  const auto& xdep = std::get<XDependentCenters>(spec.centers);
  if (!x_star) throw invalid_argument("x-dependent centers need the conditioning value x*");
  if (x_star->size() != d_y) {
    throw InputError(InputError::Kind::DimensionMismatch,
                     "x-dependent centers need d_x == d_y (got d_x = " +
                         std::to_string(x_star->size()) + ", d_y = " + std::to_string(d_y) + ")");
  }
  for (std::size_t i = 0; i < d_y; ++i) c[i] = (*x_star)[i] + rng.uniform(xdep.eps_lo, xdep.eps_hi);
  return c;
}

RegionCounts region_counts(const SampleMatrix& pool, std::size_t first, std::size_t count,
                           std::span<const double> y_star, std::span<const double> center,
                           std::span<const double> y_r, const Metric& metric,
                           std::optional<std::size_t> skip_row) {
  const std::size_t d = center.size();
  if (pool.cols() != d || y_star.size() != d || y_r.size() != d) {
    throw InputError(InputError::Kind::DimensionMismatch,
                     "region counting needs pool, y*, center and y_r of equal dimension");
  }
  if (first + count > pool.rows()) throw invalid_argument("row range exceeds the pool");

  switch (metric.kind) {
    case Metric::Kind::L2:
      return count_with(pool, first, count, y_star, y_r, skip_row,
                        [&](std::span<const double> a) { return squared_l2(a, center); });
    case Metric::Kind::L1:
      return count_with(pool, first, count, y_star, y_r, skip_row,
                        [&](std::span<const double> a) { return l1(a, center); });
    case Metric::Kind::Chebyshev:
      return count_with(pool, first, count, y_star, y_r, skip_row,
                        [&](std::span<const double> a) { return chebyshev(a, center); });
    case Metric::Kind::Minkowski:
      return count_with(pool, first, count, y_star, y_r, skip_row, [&](std::span<const double> a) {
        return powered_minkowski(a, center, metric.p);
      });
    case Metric::Kind::Cosine: {
      const double nc = norm(center);
      return count_with(pool, first, count, y_star, y_r, skip_row,
                        [&](std::span<const double> a) { return cosine_key(a, center, nc); });
    }
  }
  return {};
}

RegionCounts region_counts(const SampleMatrix& pool, std::span<const double> y_star,
                           std::span<const double> center, std::span<const double> y_r,
                           const Metric& metric, std::optional<std::size_t> skip_row) {
  return region_counts(pool, 0, pool.rows(), y_star, center, y_r, metric, skip_row);
}

}  // namespace mira
