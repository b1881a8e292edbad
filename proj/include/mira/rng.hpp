#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>

namespace mira {

/// Independent role tags mixed into the stream key so that region draws,
/// synthetic data and bootstrap resampling never share a stream.
enum class StreamPurpose : std::uint64_t {
  Regions = 0,
  Data = 1,
  Bootstrap = 2,
};

/// xoshiro256** generator with portable distribution helpers. All variates
/// are produced by code in this library, so a given key yields bit-identical
/// sequences regardless of the standard library in use.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t key);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  double normal() noexcept;
  double normal(double mean, double sd) noexcept { return mean + sd * normal(); }
  double gamma(double shape) noexcept;
  double beta(double a, double b) noexcept;

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t index(std::uint64_t bound) noexcept;

 private:
  std::array<std::uint64_t, 4> state_{};
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// Deterministic stream keyed by (seed, fiducial, region). Distinct triples
/// give unrelated streams; no state is shared between calls.
RandomStream derive_stream(std::uint64_t seed, std::uint64_t fiducial_index,
                           std::uint64_t region_index,
                           StreamPurpose purpose = StreamPurpose::Regions);

}  // namespace mira
