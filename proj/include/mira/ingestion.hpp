#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mira/statistic.hpp"
#include "mira/types.hpp"

namespace mira {

/// manifest.json: {"d_x", "d_y", "L", "fiducials", "pool_template"}.
/// Paths are relative to the manifest's directory; the pool template holds
/// an "{index}" placeholder replaced by the 0-based fiducial index.
struct DatasetManifest {
  std::int64_t d_x = 0;
  std::int64_t d_y = 0;
  std::int64_t L = 0;
  std::string fiducials_path;
  std::string pool_path_template;

  std::filesystem::path base_dir;

  std::filesystem::path fiducials_file() const;
  std::filesystem::path pool_file(std::int64_t index) const;
};

DatasetManifest read_manifest(const std::filesystem::path& manifest_path);
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& manifest_path);

/// Reads a headerless numeric CSV. Every row must have `expected_cols`
/// columns (when non-zero) and only finite values.
SampleMatrix read_csv_matrix(const std::filesystem::path& path, std::size_t expected_cols = 0);
void write_csv_matrix(const SampleMatrix& matrix, const std::filesystem::path& path);

std::vector<FiducialEntry> load_dataset(const std::filesystem::path& manifest_path);

/// Writes `source` as manifest.json, fiducials.csv and pools/pool_{index}.csv.
DatasetManifest write_dataset(const FiducialSource& source, std::int64_t d_x, std::int64_t d_y,
                              const std::filesystem::path& directory);

/// Per-dimension min-max map fitted on one pool. Dimensions where the pool
/// is constant map every value to 0.5.
class NormalizationTransform {
 public:
  NormalizationTransform() = default;
  explicit NormalizationTransform(const SampleMatrix& pool);

  Vector apply(std::span<const double> v) const;
  SampleMatrix apply(const SampleMatrix& m) const;

  const std::vector<std::pair<double, double>>& ranges() const noexcept { return ranges_; }

 private:
  std::vector<std::pair<double, double>> ranges_;
};

struct NormalizedFiducial {
  SamplePool pool;
  Vector y_star;
  NormalizationTransform transform;
};

/// Maps the pool into [0,1]^d_y and y* through the same affine map. y* may
/// land outside the unit cube; that is kept as is.
NormalizedFiducial normalize_fiducial(const SamplePool& pool, std::span<const double> y_star);

}  // namespace mira
