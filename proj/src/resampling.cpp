#include "mira/resampling.hpp"

#include <cmath>
#include <string>

#include "mira/errors.hpp"

namespace mira {

BootstrapResult bootstrap_score(std::span<const double> per_fiducial_scores, std::int64_t B,
                                RandomStream& rng) {
  if (per_fiducial_scores.empty()) throw invalid_argument("bootstrap needs at least one score");
  if (B < 2) throw invalid_argument("bootstrap needs B >= 2, got " + std::to_string(B));

  const std::size_t L = per_fiducial_scores.size();
  BootstrapResult result;
  result.B = B;
  result.means.reserve(static_cast<std::size_t>(B));
  // Sums are taken relative to the first score so constant inputs give
  // exactly constant means and a zero std.
  const double offset = per_fiducial_scores[0];
  for (std::int64_t b = 0; b < B; ++b) {
    double total = 0.0;
    for (std::size_t i = 0; i < L; ++i) total += per_fiducial_scores[rng.index(L)] - offset;
    result.means.push_back(offset + total / static_cast<double>(L));
  }

  const double first_mean = result.means[0];
  double sum = 0.0;
  for (double m : result.means) sum += m - first_mean;
  result.mean = first_mean + sum / static_cast<double>(B);
  double ss = 0.0;
  for (double m : result.means) ss += (m - result.mean) * (m - result.mean);
  result.std = std::sqrt(ss / static_cast<double>(B - 1));
  return result;
}

}  // namespace mira
