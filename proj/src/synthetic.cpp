#include "mira/synthetic.hpp"

#include <cmath>
#include <memory>

#include "mira/errors.hpp"
#include "mira/rng.hpp"

namespace mira::synthetic {
namespace {

void require_sizes(std::int64_t L, std::int64_t N) {
  if (L < 1) throw invalid_argument("synthetic dataset needs L >= 1");
  if (N < 2) throw invalid_argument("synthetic dataset needs N >= 2");
}

RandomStream data_stream(std::uint64_t seed, std::size_t i) {
  return derive_stream(seed, i, 0, StreamPurpose::Data);
}

double sign(double v) { return v > 0.0 ? 1.0 : v < 0.0 ? -1.0 : 0.0; }

}  // namespace

std::string to_string(ToyMode mode) {
  switch (mode) {
    case ToyMode::Correct: return "correct";
    case ToyMode::Overconfident: return "overconfident";
    case ToyMode::Underconfident: return "underconfident";
    case ToyMode::Biased: return "biased";
  }
  return "correct";
}

ToyMode toy_mode_from_string(const std::string& text) {
  if (text == "correct") return ToyMode::Correct;
  if (text == "overconfident") return ToyMode::Overconfident;
  if (text == "underconfident") return ToyMode::Underconfident;
  if (text == "biased") return ToyMode::Biased;
  throw invalid_argument("unknown toy mode '" + text + "'");
}

Dataset gen_gaussian_toy(const GaussianToySpec& spec) {
  require_sizes(spec.L, spec.N);
  auto make = [spec](std::size_t i) {
    RandomStream rng = data_stream(spec.seed, i);
    double theta[2], sigma[2];
    for (int d = 0; d < 2; ++d) theta[d] = rng.uniform(-5.0, 5.0);
    for (int d = 0; d < 2; ++d) sigma[d] = std::exp(rng.uniform(-5.0, -1.0));

    double candidate_mean[2] = {theta[0], theta[1]};
    if (spec.mode == ToyMode::Biased) {
      for (int d = 0; d < 2; ++d) {
        candidate_mean[d] -=
            sign(theta[d]) * spec.bias_z * (1.0 - std::abs(theta[d]) / 5.0) * sigma[d];
      }
    }
    double truth_scale = 1.0;  // on the covariance
    if (spec.mode == ToyMode::Overconfident) truth_scale = 3.0;
    if (spec.mode == ToyMode::Underconfident) truth_scale = 0.5;

    FiducialEntry entry;
    entry.fiducial.index = static_cast<std::int64_t>(i);
    entry.fiducial.x_star = {theta[0], theta[1]};
    entry.fiducial.y_star.resize(2);
    for (int d = 0; d < 2; ++d) {
      entry.fiducial.y_star[d] = theta[d] + std::sqrt(truth_scale) * sigma[d] * rng.normal();
    }
    SampleMatrix pool(static_cast<std::size_t>(spec.N), 2);
    for (std::size_t r = 0; r < pool.rows(); ++r) {
      for (int d = 0; d < 2; ++d) pool(r, d) = candidate_mean[d] + sigma[d] * rng.normal();
    }
    entry.pool = SamplePool(std::move(pool), entry.fiducial.index);
    return entry;
  };
  return {{static_cast<std::size_t>(spec.L), make}, 2, 2};
}

LinRegPosterior linreg_posterior(const LinRegSpec& spec, double z, double x) {
  // Precision P = diag(1/v_m, 1/v_b) + phi phi^T / s^2 with phi = (z, 1).
  const double pm = 1.0 / spec.prior_var_slope;
  const double pb = 1.0 / spec.prior_var_intercept;
  const double w = 1.0 / (spec.noise_sigma * spec.noise_sigma);
  const double p00 = pm + z * z * w;
  const double p01 = z * w;
  const double p11 = pb + w;
  // Closed form of det(P); the expanded product cancels badly for small s.
  const double det = pm * pb + (pm + pb * z * z) * w;

  LinRegPosterior post;
  post.precision_det = det;
  post.cov[0][0] = p11 / det;
  post.cov[0][1] = post.cov[1][0] = -p01 / det;
  post.cov[1][1] = p00 / det;
  const double h0 = z * x * w;
  const double h1 = x * w;
  post.mean[0] = post.cov[0][0] * h0 + post.cov[0][1] * h1;
  post.mean[1] = post.cov[1][0] * h0 + post.cov[1][1] * h1;
  return post;
}

Dataset gen_linreg(const LinRegSpec& spec) {
  require_sizes(spec.L, spec.N);
  if (!(spec.noise_sigma > 0.0) || !(spec.true_noise_sigma > 0.0)) {
    throw invalid_argument("linear regression noise levels must be positive");
  }
  auto make = [spec](std::size_t i) {
    RandomStream rng = data_stream(spec.seed, i);
    const double m = std::sqrt(spec.prior_var_slope) * rng.normal();
    const double b = std::sqrt(spec.prior_var_intercept) * rng.normal();
    const double z = rng.uniform(-1.0, 1.0);
    const double x = m * z + b + spec.true_noise_sigma * rng.normal();

    const LinRegPosterior post = linreg_posterior(spec, z, x);
    // Cholesky of the 2x2 covariance; the Schur complement is taken as
    // 1 / (det(P) c00) to avoid cancellation on the near-degenerate axis.
    const double l00 = std::sqrt(post.cov[0][0]);
    const double l10 = post.cov[1][0] / l00;
    const double l11 = std::sqrt(1.0 / (post.precision_det * post.cov[0][0]));

    FiducialEntry entry;
    entry.fiducial.index = static_cast<std::int64_t>(i);
    entry.fiducial.x_star = {z, x};
    entry.fiducial.y_star = {m, b};
    SampleMatrix pool(static_cast<std::size_t>(spec.N), 2);
    for (std::size_t r = 0; r < pool.rows(); ++r) {
      const double e0 = rng.normal();
      const double e1 = rng.normal();
      pool(r, 0) = post.mean[0] + l00 * e0;
      pool(r, 1) = post.mean[1] + l10 * e0 + l11 * e1;
    }
    entry.pool = SamplePool(std::move(pool), entry.fiducial.index);
    return entry;
  };
  return {{static_cast<std::size_t>(spec.L), make}, 2, 2};
}

Dataset gen_gmm_shift(const GmmShiftSpec& spec) {
  require_sizes(spec.L, spec.N);
  if (spec.dim < 1 || spec.components < 1) {
    throw invalid_argument("GMM needs dim >= 1 and components >= 1");
  }
  const auto dim = static_cast<std::size_t>(spec.dim);
  const auto k = static_cast<std::size_t>(spec.components);
  auto means = std::make_shared<SampleMatrix>(k, dim);
  RandomStream base = derive_stream(spec.base_seed, 0, 0, StreamPurpose::Data);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t d = 0; d < dim; ++d) (*means)(c, d) = spec.mean_spread * base.normal();
  }

  auto make = [spec, means, dim, k](std::size_t i) {
    RandomStream rng = data_stream(spec.seed, i);
    auto draw = [&](std::span<double> out, double shift) {
      const auto mean = means->row(rng.index(k));
      for (std::size_t d = 0; d < dim; ++d) out[d] = mean[d] + shift + rng.normal();
    };
    FiducialEntry entry;
    entry.fiducial.index = static_cast<std::int64_t>(i);
    entry.fiducial.x_star = {0.0};
    entry.fiducial.y_star.resize(dim);
    draw(entry.fiducial.y_star, 0.0);
    SampleMatrix pool(static_cast<std::size_t>(spec.N), dim);
    for (std::size_t r = 0; r < pool.rows(); ++r) draw(pool.row(r), spec.shift);
    entry.pool = SamplePool(std::move(pool), entry.fiducial.index);
    return entry;
  };
  return {{static_cast<std::size_t>(spec.L), make}, 1, spec.dim};
}

Dataset gen_uninformative(const UninformativeSpec& spec) {
  require_sizes(spec.L, spec.N);
  if (!(spec.obs_sd > 0.0)) throw invalid_argument("observation sd must be positive");
  auto make = [spec](std::size_t i) {
    RandomStream rng = data_stream(spec.seed, i);
    const double y = rng.normal();
    const double x = y + spec.obs_sd * rng.normal();
    // Conjugate posterior of a unit-variance prior and one observation.
    const double noise_var = spec.obs_sd * spec.obs_sd;
    const double post_var = noise_var / (1.0 + noise_var);
    const double post_mean = x / (1.0 + noise_var);

    FiducialEntry entry;
    entry.fiducial.index = static_cast<std::int64_t>(i);
    entry.fiducial.x_star = {x};
    entry.fiducial.y_star = {y};
    SampleMatrix pool(static_cast<std::size_t>(spec.N), 1);
    for (std::size_t r = 0; r < pool.rows(); ++r) {
      pool(r, 0) = spec.exact_posterior ? post_mean + std::sqrt(post_var) * rng.normal()
                                        : rng.normal();
    }
    entry.pool = SamplePool(std::move(pool), entry.fiducial.index);
    return entry;
  };
  return {{static_cast<std::size_t>(spec.L), make}, 1, 1};
}

Dataset gen_disjoint(const DisjointSpec& spec) {
  require_sizes(spec.L, spec.N);
  if (spec.separation < 0.0) throw invalid_argument("separation must be non-negative");
  if (spec.dim < 1) throw invalid_argument("disjoint fixture needs dim >= 1");
  const auto dim = static_cast<std::size_t>(spec.dim);
  auto make = [spec, dim](std::size_t i) {
    RandomStream rng = data_stream(spec.seed, i);
    FiducialEntry entry;
    entry.fiducial.index = static_cast<std::int64_t>(i);
    entry.fiducial.y_star.resize(dim);
    for (auto& v : entry.fiducial.y_star) v = spec.separation + rng.normal();
    SampleMatrix pool(static_cast<std::size_t>(spec.N), dim);
    for (std::size_t r = 0; r < pool.rows(); ++r) {
      for (std::size_t d = 0; d < dim; ++d) pool(r, d) = rng.normal();
    }
    entry.pool = SamplePool(std::move(pool), entry.fiducial.index);
    return entry;
  };
  return {{static_cast<std::size_t>(spec.L), make}, 0, spec.dim};
}

}  // namespace mira::synthetic
