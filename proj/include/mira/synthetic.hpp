#pragma once

#include <cstdint>
#include <string>

#include "mira/statistic.hpp"

namespace mira::synthetic {

/// A lazily generated dataset. Fiducial i is a pure function of the spec's
/// seed and i, so any subset can be produced in any order.
struct Dataset {
  FiducialSource source;
  std::int64_t d_x = 0;
  std::int64_t d_y = 0;
};

// ---------------------------------------------------------------------------
// Gaussian toy: theta* ~ U([-5,5]^2), diagonal covariance with
// log sigma_i ~ U(-5,-1). The candidate is always N(theta*, Sigma); the
// truth is drawn from a mode-dependent law.

enum class ToyMode { Correct, Overconfident, Underconfident, Biased };

std::string to_string(ToyMode mode);
ToyMode toy_mode_from_string(const std::string& text);

struct GaussianToySpec {
  ToyMode mode = ToyMode::Correct;
  std::int64_t L = 1000;
  std::int64_t N = 500;
  std::uint64_t seed = 0;
  /// Multiplier Z of the biased-mode shift sign(theta) Z (1 - |theta|/5) sigma.
  double bias_z = 6.0;
};

Dataset gen_gaussian_toy(const GaussianToySpec& spec);

// ---------------------------------------------------------------------------
// Linear regression x = m z + b + eta with weights [m, b] ~ N(0, diag(0.5, 2))
// and z ~ U[-1, 1]. Observations use the true noise; the candidate pool is
// drawn from the exact conjugate posterior under `noise_sigma`.

struct LinRegSpec {
  double noise_sigma = 0.001;
  std::int64_t L = 5000;
  std::int64_t N = 5000;
  std::uint64_t seed = 0;
  double true_noise_sigma = 0.001;
  double prior_var_slope = 0.5;
  double prior_var_intercept = 2.0;
};

Dataset gen_linreg(const LinRegSpec& spec);

/// Mean and covariance of the posterior over [m, b] given one observation.
struct LinRegPosterior {
  double mean[2];
  double cov[2][2];
  double precision_det;
};

LinRegPosterior linreg_posterior(const LinRegSpec& spec, double z, double x);

// ---------------------------------------------------------------------------
// Gaussian mixture shifted along the diagonal. The base mixture has unit
// covariances, uniform weights and component means drawn i.i.d.
// N(0, mean_spread^2) from `base_seed`; the candidate adds `shift` to every
// coordinate of every mean. Not conditional: x* is a dummy 0.

struct GmmShiftSpec {
  std::int64_t dim = 100;
  std::int64_t components = 20;
  double shift = 0.0;
  std::int64_t N = 5000;
  std::int64_t L = 5000;
  std::uint64_t seed = 0;
  double mean_spread = 4.5;
  std::uint64_t base_seed = 1;
};

Dataset gen_gmm_shift(const GmmShiftSpec& spec);

// ---------------------------------------------------------------------------
// Uninformative estimator: y ~ N(0,1), x ~ N(y, obs_sd^2) and the candidate
// ignores x and samples the prior. With `exact_posterior` the pool is drawn
// from the true posterior instead.

struct UninformativeSpec {
  std::int64_t L = 1000;
  std::int64_t N = 1000;
  std::uint64_t seed = 0;
  double obs_sd = 0.1;
  bool exact_posterior = false;
};

Dataset gen_uninformative(const UninformativeSpec& spec);

// ---------------------------------------------------------------------------
// Disjoint supports: y* ~ N(separation * 1, I), pool ~ N(0, I).

struct DisjointSpec {
  std::int64_t L = 1000;
  std::int64_t N = 500;
  double separation = 100.0;
  std::int64_t dim = 2;
  std::uint64_t seed = 0;
};

Dataset gen_disjoint(const DisjointSpec& spec);

}  // namespace mira::synthetic
