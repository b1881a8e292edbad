#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mira/types.hpp"

namespace mira {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kReportSchemaVersion = "1.0";

// JSON mapping for the domain types (found by nlohmann through ADL).
void to_json(nlohmann::json& j, const Metric& m);
void from_json(const nlohmann::json& j, Metric& m);
void to_json(nlohmann::json& j, const CenterMode& c);
void from_json(const nlohmann::json& j, CenterMode& c);
void to_json(nlohmann::json& j, const RegionSpec& s);
void from_json(const nlohmann::json& j, RegionSpec& s);
void to_json(nlohmann::json& j, const PoolMode& p);
void from_json(const nlohmann::json& j, PoolMode& p);
void to_json(nlohmann::json& j, const MiraConfig& c);
void from_json(const nlohmann::json& j, MiraConfig& c);
void to_json(nlohmann::json& j, const RegionOutcome& o);
void from_json(const nlohmann::json& j, RegionOutcome& o);
void to_json(nlohmann::json& j, const GofResult& g);
void from_json(const nlohmann::json& j, GofResult& g);
void to_json(nlohmann::json& j, const FiducialPair& f);
void from_json(const nlohmann::json& j, FiducialPair& f);
void to_json(nlohmann::json& j, const SamplePool& p);
void from_json(const nlohmann::json& j, SamplePool& p);
void to_json(nlohmann::json& j, const ScoreReport& r);
void from_json(const nlohmann::json& j, ScoreReport& r);

struct ReportMetadata {
  std::string timestamp;      // excluded from reproducibility comparisons
  std::string manifest_hash;  // "fnv1a64:<hex>" of the manifest bytes
};

/// The document written by `mira score`: the report plus tool metadata.
nlohmann::json make_report_document(const ScoreReport& report, const ReportMetadata& meta);
ScoreReport report_from_document(const nlohmann::json& doc);

std::string fnv1a64_file(const std::filesystem::path& path);
std::string utc_timestamp();

/// Region outcome CSV: header `fiducial,region,n,k,statistic`.
void write_outcomes_csv(const std::vector<std::vector<RegionOutcome>>& outcomes,
                        const std::filesystem::path& path);
std::vector<RegionOutcome> read_outcomes_csv(const std::filesystem::path& path);

/// Per-fiducial score CSV: header `fiducial,score`.
void write_fiducial_scores_csv(const std::vector<double>& scores,
                               const std::filesystem::path& path);
std::vector<double> read_fiducial_scores_csv(const std::filesystem::path& path);

}  // namespace mira
