#include "mira/ingestion.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mira {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

InputError file_error(InputError::Kind kind, const fs::path& path, std::size_t row,
                      const std::string& what) {
  return InputError(kind, path.string() + ", row " + std::to_string(row + 1) + ": " + what);
}

double parse_cell(std::string_view cell, const fs::path& path, std::size_t row) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw file_error(InputError::Kind::Malformed, path, row,
                     "cannot parse '" + std::string(cell) + "' as a number");
  }
  if (!std::isfinite(value)) {
    throw file_error(InputError::Kind::NonFinite, path, row,
                     "non-finite value '" + std::string(cell) + "'");
  }
  return value;
}

template <class T>
T required(const json& doc, const char* key, const fs::path& path) {
  if (!doc.contains(key)) {
    throw InputError(InputError::Kind::Malformed,
                     path.string() + ": manifest is missing key '" + key + "'");
  }
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(InputError::Kind::Malformed,
                     path.string() + ": manifest key '" + key + "' has the wrong type");
  }
}

}  // namespace

fs::path DatasetManifest::fiducials_file() const { return base_dir / fiducials_path; }

fs::path DatasetManifest::pool_file(std::int64_t index) const {
  std::string name = pool_path_template;
  const std::string placeholder = "{index}";
  const auto pos = name.find(placeholder);
  if (pos != std::string::npos) name.replace(pos, placeholder.size(), std::to_string(index));
  return base_dir / name;
}

DatasetManifest read_manifest(const fs::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) {
    throw InputError(InputError::Kind::MissingFile,
                     manifest_path.string() + ": cannot open manifest");
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw InputError(InputError::Kind::Malformed,
                     manifest_path.string() + ": invalid JSON (" + e.what() + ")");
  }
  DatasetManifest m;
  m.d_x = required<std::int64_t>(doc, "d_x", manifest_path);
  m.d_y = required<std::int64_t>(doc, "d_y", manifest_path);
  m.L = required<std::int64_t>(doc, "L", manifest_path);
  m.fiducials_path = required<std::string>(doc, "fiducials", manifest_path);
  m.pool_path_template = required<std::string>(doc, "pool_template", manifest_path);
  m.base_dir = manifest_path.parent_path();
  if (m.d_x < 0 || m.d_y < 1 || m.L < 1) {
    throw InputError(InputError::Kind::Malformed,
                     manifest_path.string() + ": need d_x >= 0, d_y >= 1 and L >= 1");
  }
  if (m.pool_path_template.find("{index}") == std::string::npos) {
    throw InputError(InputError::Kind::Malformed,
                     manifest_path.string() + ": pool_template has no {index} placeholder");
  }
  return m;
}

void write_manifest(const DatasetManifest& manifest, const fs::path& manifest_path) {
  const json doc = {{"d_x", manifest.d_x},
                    {"d_y", manifest.d_y},
                    {"L", manifest.L},
                    {"fiducials", manifest.fiducials_path},
                    {"pool_template", manifest.pool_path_template}};
  std::ofstream out(manifest_path);
  if (!out) throw InputError(InputError::Kind::MissingFile, manifest_path.string() + ": cannot write");
  out << doc.dump(2) << '\n';
}

SampleMatrix read_csv_matrix(const fs::path& path, std::size_t expected_cols) {
  std::ifstream in(path);
  if (!in) throw InputError(InputError::Kind::MissingFile, path.string() + ": cannot open file");

  std::vector<double> data;
  std::size_t cols = expected_cols;
  std::size_t rows = 0;
  std::string line;
  for (std::size_t line_no = 0; std::getline(in, line); ++line_no) {
    if (trim(line).empty()) continue;
    std::size_t count = 0;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      data.push_back(parse_cell(rest.substr(0, comma), path, line_no));
      ++count;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (cols == 0) cols = count;
    if (count != cols) {
      throw file_error(InputError::Kind::DimensionMismatch, path, line_no,
                       "expected " + std::to_string(cols) + " columns, found " +
                           std::to_string(count));
    }
    ++rows;
  }
  return SampleMatrix(rows, rows == 0 ? expected_cols : cols, std::move(data));
}

void write_csv_matrix(const SampleMatrix& matrix, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError(InputError::Kind::MissingFile, path.string() + ": cannot write");
  char buf[32];
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    const auto row = matrix.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      // Shortest representation that reads back to the same double.
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, row[j]);
      if (j) out << ',';
      out.write(buf, ptr - buf);
    }
    out << '\n';
  }
}

std::vector<FiducialEntry> load_dataset(const fs::path& manifest_path) {
  const DatasetManifest m = read_manifest(manifest_path);
  const auto d_x = static_cast<std::size_t>(m.d_x);
  const auto d_y = static_cast<std::size_t>(m.d_y);

  const SampleMatrix fiducials = read_csv_matrix(m.fiducials_file(), d_x + d_y);
  if (fiducials.rows() != static_cast<std::size_t>(m.L)) {
    throw InputError(InputError::Kind::DimensionMismatch,
                     m.fiducials_file().string() + ": manifest declares L = " +
                         std::to_string(m.L) + " but the file has " +
                         std::to_string(fiducials.rows()) + " rows");
  }

  std::vector<FiducialEntry> entries;
  entries.reserve(fiducials.rows());
  for (std::size_t i = 0; i < fiducials.rows(); ++i) {
    const auto row = fiducials.row(i);
    FiducialPair pair;
    pair.index = static_cast<std::int64_t>(i);
    pair.x_star.assign(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(d_x));
    pair.y_star.assign(row.begin() + static_cast<std::ptrdiff_t>(d_x), row.end());

    const fs::path pool_path = m.pool_file(pair.index);
    SampleMatrix samples = read_csv_matrix(pool_path, d_y);
    if (samples.rows() < 2) {
      throw InputError(InputError::Kind::DimensionMismatch,
                       pool_path.string() + ": a pool needs at least 2 rows, found " +
                           std::to_string(samples.rows()));
    }
    const std::int64_t index = pair.index;
    entries.push_back({std::move(pair), SamplePool(std::move(samples), index)});
  }
  return entries;
}

DatasetManifest write_dataset(const FiducialSource& source, std::int64_t d_x, std::int64_t d_y,
                              const fs::path& directory) {
  fs::create_directories(directory / "pools");
  DatasetManifest m;
  m.d_x = d_x;
  m.d_y = d_y;
  m.L = static_cast<std::int64_t>(source.size);
  m.fiducials_path = "fiducials.csv";
  m.pool_path_template = "pools/pool_{index}.csv";
  m.base_dir = directory;

  SampleMatrix fiducials(source.size, static_cast<std::size_t>(d_x + d_y));
  for (std::size_t i = 0; i < source.size; ++i) {
    const FiducialEntry entry = source.at(i);
    if (entry.fiducial.x_star.size() != static_cast<std::size_t>(d_x) ||
        entry.fiducial.y_star.size() != static_cast<std::size_t>(d_y)) {
      throw InputError(InputError::Kind::DimensionMismatch,
                       "fiducial " + std::to_string(i) + " does not match d_x/d_y");
    }
    auto row = fiducials.row(i);
    std::copy(entry.fiducial.x_star.begin(), entry.fiducial.x_star.end(), row.begin());
    std::copy(entry.fiducial.y_star.begin(), entry.fiducial.y_star.end(),
              row.begin() + static_cast<std::ptrdiff_t>(d_x));
    write_csv_matrix(entry.pool.samples(), m.pool_file(static_cast<std::int64_t>(i)));
  }
  write_csv_matrix(fiducials, m.fiducials_file());
  write_manifest(m, directory / "manifest.json");
  return m;
}

NormalizationTransform::NormalizationTransform(const SampleMatrix& pool) {
  if (pool.empty()) throw invalid_argument("normalization needs a non-empty pool");
  ranges_.assign(pool.cols(), {0.0, 0.0});
  for (std::size_t j = 0; j < pool.cols(); ++j) ranges_[j] = {pool(0, j), pool(0, j)};
  for (std::size_t i = 1; i < pool.rows(); ++i) {
    for (std::size_t j = 0; j < pool.cols(); ++j) {
      ranges_[j].first = std::min(ranges_[j].first, pool(i, j));
      ranges_[j].second = std::max(ranges_[j].second, pool(i, j));
    }
  }
}

Vector NormalizationTransform::apply(std::span<const double> v) const {
  if (v.size() != ranges_.size()) {
    throw InputError(InputError::Kind::DimensionMismatch,
                     "normalization of a vector of dimension " + std::to_string(v.size()) +
                         ", expected " + std::to_string(ranges_.size()));
  }
  Vector out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const auto [lo, hi] = ranges_[j];
    out[j] = hi > lo ? (v[j] - lo) / (hi - lo) : 0.5;
  }
  return out;
}

SampleMatrix NormalizationTransform::apply(const SampleMatrix& m) const {
  SampleMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const Vector row = apply(m.row(i));
    std::copy(row.begin(), row.end(), out.row(i).begin());
  }
  return out;
}

NormalizedFiducial normalize_fiducial(const SamplePool& pool, std::span<const double> y_star) {
  NormalizationTransform transform(pool.samples());
  SamplePool normalized(transform.apply(pool.samples()), pool.fiducial_index());
  Vector y = transform.apply(y_star);
  return {std::move(normalized), std::move(y), std::move(transform)};
}

}  // namespace mira
