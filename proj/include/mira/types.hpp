#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mira/errors.hpp"

namespace mira {

using Vector = std::vector<double>;

/// Dense row-major matrix of samples, one sample per row.
class SampleMatrix {
 public:
  SampleMatrix() = default;
  SampleMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  SampleMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static SampleMatrix from_rows(const std::vector<Vector>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  std::span<const double> data() const noexcept { return data_; }

  bool operator==(const SampleMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// One joint draw (x*, y*) from the true process.
struct FiducialPair {
  Vector x_star;
  Vector y_star;
  std::int64_t index = 0;

  bool operator==(const FiducialPair&) const = default;
};

/// The candidate draws attached to one fiducial. At least two rows.
class SamplePool {
 public:
  SamplePool() = default;
  SamplePool(SampleMatrix samples, std::int64_t fiducial_index);

  const SampleMatrix& samples() const noexcept { return samples_; }
  std::int64_t fiducial_index() const noexcept { return fiducial_index_; }
  std::size_t size() const noexcept { return samples_.rows(); }
  std::size_t dim() const noexcept { return samples_.cols(); }

  bool operator==(const SamplePool&) const = default;

 private:
  SampleMatrix samples_;
  std::int64_t fiducial_index_ = 0;
};

struct FiducialEntry {
  FiducialPair fiducial;
  SamplePool pool;

  bool operator==(const FiducialEntry&) const = default;
};

// ---------------------------------------------------------------------------
// Region construction

struct Metric {
  enum class Kind { L2, L1, Chebyshev, Cosine, Minkowski };

  Kind kind = Kind::L2;
  double p = 2.0;  // Minkowski order only

  static Metric l2() { return {Kind::L2, 2.0}; }
  static Metric l1() { return {Kind::L1, 1.0}; }
  static Metric chebyshev() { return {Kind::Chebyshev, 0.0}; }
  static Metric cosine() { return {Kind::Cosine, 0.0}; }
  static Metric minkowski(double p);

  /// Parses "l2", "l1", "chebyshev", "cosine" or "minkowski:<p>".
  static Metric parse(const std::string& text);
  std::string to_string() const;

  bool operator==(const Metric&) const = default;
};

/// One-dimensional law applied i.i.d. per coordinate of a region center.
struct CenterLaw {
  enum class Kind { Uniform, Normal, Beta };

  Kind kind = Kind::Uniform;
  double a = 0.0;  // lo | mean | alpha
  double b = 1.0;  // hi | sd   | beta

  static CenterLaw uniform(double lo, double hi);
  static CenterLaw normal(double mean, double sd);
  static CenterLaw beta(double alpha, double beta);

  /// Parses "uniform:lo,hi", "normal:mean,sd" or "beta:a,b".
  static CenterLaw parse(const std::string& text);
  std::string to_string() const;

  bool operator==(const CenterLaw&) const = default;
};

/// Centers placed at x* + eps with eps_i ~ Uniform(eps_lo, eps_hi).
struct XDependentCenters {
  double eps_lo = -0.05;
  double eps_hi = 0.05;

  XDependentCenters() = default;
  XDependentCenters(double lo, double hi);

  bool operator==(const XDependentCenters&) const = default;
};

using CenterMode = std::variant<CenterLaw, XDependentCenters>;

struct RegionSpec {
  Metric metric = Metric::l2();
  CenterMode centers = CenterLaw{};
  std::int64_t regions_per_fiducial = 100;

  void validate() const;

  bool operator==(const RegionSpec&) const = default;
};

// ---------------------------------------------------------------------------
// Outcomes and configuration

struct RegionOutcome {
  std::int64_t n = 0;
  int k = 0;
  double statistic = 0.5;

  bool operator==(const RegionOutcome&) const = default;
};

/// How the region reference y_r is taken from a finite pool.
struct PoolMode {
  enum class Kind { Exclusion, Reserved };

  Kind kind = Kind::Exclusion;
  std::size_t reserved_count = 0;

  static PoolMode exclusion() { return {}; }
  static PoolMode reserved(std::size_t count) { return {Kind::Reserved, count}; }

  /// Parses "exclusion" or "reserved:<count>".
  static PoolMode parse(const std::string& text);
  std::string to_string() const;

  bool operator==(const PoolMode&) const = default;
};

struct MiraConfig {
  RegionSpec region_spec;
  bool normalize = true;
  std::uint64_t seed = 0;
  std::int64_t bootstrap_iterations = 200;  // 0 disables the bootstrap
  PoolMode pool_mode;
  double diagnosis_z = 3.0;
  bool compute_gof = true;
  bool keep_outcomes = false;

  void validate() const;

  bool operator==(const MiraConfig&) const = default;
};

enum class Diagnosis { ConsistentWithNull, Overconfident, Underconfident };

std::string to_string(Diagnosis d);
Diagnosis diagnosis_from_string(const std::string& text);

/// One-sample KS distance against the Beta(2,1) CDF F(x) = x^2.
struct GofResult {
  double ks_statistic = 0.0;
  std::int64_t n_samples = 0;

  bool operator==(const GofResult&) const = default;
};

struct ScoreReport {
  double score = 0.0;
  std::vector<double> per_fiducial_scores;
  std::int64_t n_eff = 0;  // smallest countable pool size across fiducials
  double theoretical_mean_finite_n = 0.0;
  double band_center = 2.0 / 3.0;
  double band_half_width = 0.0;
  std::optional<double> bootstrap_mean;
  std::optional<double> bootstrap_std;
  Diagnosis diagnosis = Diagnosis::ConsistentWithNull;
  std::optional<GofResult> gof;
  std::optional<GofResult> gof_sufficiency;
  MiraConfig config_echo;

  /// Per-fiducial region outcomes, filled only when config.keep_outcomes.
  std::vector<std::vector<RegionOutcome>> outcomes;

  bool operator==(const ScoreReport&) const = default;
};

}  // namespace mira
