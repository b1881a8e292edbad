#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mira/rng.hpp"

namespace mira {

struct BootstrapResult {
  std::vector<double> means;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation of `means` (divisor B - 1)
  std::int64_t B = 0;
};

/// Non-parametric bootstrap over fiducials. Each iteration draws L indices
/// with replacement and averages the cached per-fiducial scores; regions are
/// not recomputed.
BootstrapResult bootstrap_score(std::span<const double> per_fiducial_scores, std::int64_t B,
                                RandomStream& rng);

}  // namespace mira
