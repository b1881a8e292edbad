#include "mira/report.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iterator>
#include <sstream>

#include "mira/errors.hpp"

namespace mira {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

InputError malformed(const std::string& what) {
  return InputError(InputError::Kind::Malformed, what);
}

template <class T>
std::optional<T> optional_field(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

std::string center_kind_name(CenterLaw::Kind kind) {
  switch (kind) {
    case CenterLaw::Kind::Uniform: return "uniform";
    case CenterLaw::Kind::Normal: return "normal";
    case CenterLaw::Kind::Beta: return "beta";
  }
  return "uniform";
}

std::string format_number(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

template <class T>
T parse_cell(const std::string& cell, const fs::path& path, std::size_t line) {
  T value{};
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  while (last > first && (last[-1] == '\r' || last[-1] == ' ')) --last;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (first == last || ec != std::errc() || ptr != last) {
    throw malformed(path.string() + ", line " + std::to_string(line) + ": cannot parse '" +
                    cell + "'");
  }
  return value;
}

std::vector<std::vector<std::string>> read_table(const fs::path& path,
                                                 const std::string& expected_header) {
  std::ifstream in(path);
  if (!in) throw InputError(InputError::Kind::MissingFile, path.string() + ": cannot open file");
  std::string line;
  if (!std::getline(in, line)) throw malformed(path.string() + ": file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected_header) {
    throw malformed(path.string() + ": expected header '" + expected_header + "', got '" + line +
                    "'");
  }
  const std::size_t columns = split(expected_header).size();
  std::vector<std::vector<std::string>> rows;
  for (std::size_t line_no = 2; std::getline(in, line); ++line_no) {
    if (line.empty() || line == "\r") continue;
    auto cells = split(line);
    if (cells.size() != columns) {
      throw malformed(path.string() + ", line " + std::to_string(line_no) + ": expected " +
                      std::to_string(columns) + " columns");
    }
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) throw malformed(path.string() + ": no data rows");
  return rows;
}

}  // namespace

void to_json(json& j, const Metric& m) {
  j = json{{"kind", m.kind == Metric::Kind::Minkowski ? "minkowski" : m.to_string()}};
  if (m.kind == Metric::Kind::Minkowski) j["p"] = m.p;
}

void from_json(const json& j, Metric& m) {
  const auto kind = j.at("kind").get<std::string>();
  m = kind == "minkowski" ? Metric::minkowski(j.at("p").get<double>()) : Metric::parse(kind);
}

void to_json(json& j, const CenterMode& c) {
  if (const auto* law = std::get_if<CenterLaw>(&c)) {
    j = json{{"kind", center_kind_name(law->kind)}, {"a", law->a}, {"b", law->b}};
  } else {
    const auto& x = std::get<XDependentCenters>(c);
    j = json{{"kind", "x_dependent"}, {"eps_lo", x.eps_lo}, {"eps_hi", x.eps_hi}};
  }
}

void from_json(const json& j, CenterMode& c) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "x_dependent") {
    c = XDependentCenters(j.at("eps_lo").get<double>(), j.at("eps_hi").get<double>());
    return;
  }
  const double a = j.at("a").get<double>();
  const double b = j.at("b").get<double>();
  if (kind == "uniform") c = CenterLaw::uniform(a, b);
  else if (kind == "normal") c = CenterLaw::normal(a, b);
  else if (kind == "beta") c = CenterLaw::beta(a, b);
  else throw malformed("unknown center kind '" + kind + "'");
}

void to_json(json& j, const RegionSpec& s) {
  j = json{{"metric", s.metric},
           {"centers", s.centers},
           {"regions_per_fiducial", s.regions_per_fiducial}};
}

void from_json(const json& j, RegionSpec& s) {
  s.metric = j.at("metric").get<Metric>();
  s.centers = j.at("centers").get<CenterMode>();
  s.regions_per_fiducial = j.at("regions_per_fiducial").get<std::int64_t>();
}

void to_json(json& j, const PoolMode& p) { j = p.to_string(); }
void from_json(const json& j, PoolMode& p) { p = PoolMode::parse(j.get<std::string>()); }

void to_json(json& j, const MiraConfig& c) {
  j = json{{"region_spec", c.region_spec},
           {"normalize", c.normalize},
           {"seed", c.seed},
           {"bootstrap_iterations", c.bootstrap_iterations},
           {"pool_mode", c.pool_mode},
           {"diagnosis_z", c.diagnosis_z},
           {"compute_gof", c.compute_gof},
           {"keep_outcomes", c.keep_outcomes}};
}

void from_json(const json& j, MiraConfig& c) {
  c.region_spec = j.at("region_spec").get<RegionSpec>();
  c.normalize = j.at("normalize").get<bool>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.bootstrap_iterations = j.at("bootstrap_iterations").get<std::int64_t>();
  c.pool_mode = j.at("pool_mode").get<PoolMode>();
  c.diagnosis_z = j.at("diagnosis_z").get<double>();
  c.compute_gof = j.at("compute_gof").get<bool>();
  c.keep_outcomes = j.at("keep_outcomes").get<bool>();
}

void to_json(json& j, const RegionOutcome& o) {
  j = json{{"n", o.n}, {"k", o.k}, {"statistic", o.statistic}};
}

void from_json(const json& j, RegionOutcome& o) {
  o.n = j.at("n").get<std::int64_t>();
  o.k = j.at("k").get<int>();
  o.statistic = j.at("statistic").get<double>();
}

void to_json(json& j, const GofResult& g) {
  j = json{{"ks_statistic", g.ks_statistic},
           {"n_samples", g.n_samples},
           {"reference_cdf", "x^2"}};
}

void from_json(const json& j, GofResult& g) {
  g.ks_statistic = j.at("ks_statistic").get<double>();
  g.n_samples = j.at("n_samples").get<std::int64_t>();
}

void to_json(json& j, const FiducialPair& f) {
  j = json{{"index", f.index}, {"x_star", f.x_star}, {"y_star", f.y_star}};
}

void from_json(const json& j, FiducialPair& f) {
  f.index = j.at("index").get<std::int64_t>();
  f.x_star = j.at("x_star").get<Vector>();
  f.y_star = j.at("y_star").get<Vector>();
}

void to_json(json& j, const SamplePool& p) {
  const auto& m = p.samples();
  j = json{{"fiducial_index", p.fiducial_index()},
           {"rows", m.rows()},
           {"cols", m.cols()},
           {"samples", std::vector<double>(m.data().begin(), m.data().end())}};
}

void from_json(const json& j, SamplePool& p) {
  p = SamplePool(SampleMatrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                              j.at("samples").get<std::vector<double>>()),
                 j.at("fiducial_index").get<std::int64_t>());
}

void to_json(json& j, const ScoreReport& r) {
  j = json{{"score", r.score},
           {"L", r.per_fiducial_scores.size()},
           {"n_eff", r.n_eff},
           {"per_fiducial_scores", r.per_fiducial_scores},
           {"theoretical",
            {{"mean_finite_n", r.theoretical_mean_finite_n},
             {"band_center", r.band_center},
             {"band_half_width", r.band_half_width},
             {"lower_bound", 0.5}}},
           {"diagnosis", to_string(r.diagnosis)},
           {"config_echo", r.config_echo}};
  j["bootstrap"] = r.bootstrap_mean && r.bootstrap_std
                       ? json{{"mean", *r.bootstrap_mean}, {"std", *r.bootstrap_std}}
                       : json(nullptr);
  j["gof"] = r.gof ? json(*r.gof) : json(nullptr);
  j["gof_sufficiency"] = r.gof_sufficiency ? json(*r.gof_sufficiency) : json(nullptr);
}

void from_json(const json& j, ScoreReport& r) {
  r.score = j.at("score").get<double>();
  r.per_fiducial_scores = j.at("per_fiducial_scores").get<std::vector<double>>();
  r.n_eff = j.at("n_eff").get<std::int64_t>();
  const auto& t = j.at("theoretical");
  r.theoretical_mean_finite_n = t.at("mean_finite_n").get<double>();
  r.band_center = t.at("band_center").get<double>();
  r.band_half_width = t.at("band_half_width").get<double>();
  r.diagnosis = diagnosis_from_string(j.at("diagnosis").get<std::string>());
  r.config_echo = j.at("config_echo").get<MiraConfig>();
  r.bootstrap_mean.reset();
  r.bootstrap_std.reset();
  if (j.contains("bootstrap") && !j.at("bootstrap").is_null()) {
    r.bootstrap_mean = j.at("bootstrap").at("mean").get<double>();
    r.bootstrap_std = j.at("bootstrap").at("std").get<double>();
  }
  r.gof = optional_field<GofResult>(j, "gof");
  r.gof_sufficiency = optional_field<GofResult>(j, "gof_sufficiency");
  r.outcomes.clear();
}

json make_report_document(const ScoreReport& report, const ReportMetadata& meta) {
  return json{{"schema_version", kReportSchemaVersion},
              {"tool", {{"name", "mira"}, {"version", kToolVersion}}},
              {"timestamp", meta.timestamp},
              {"input", {{"manifest_hash", meta.manifest_hash}}},
              {"report", report}};
}

ScoreReport report_from_document(const json& doc) {
  try {
    return doc.at("report").get<ScoreReport>();
  } catch (const json::exception& e) {
    throw malformed(std::string("report document: ") + e.what());
  }
}

std::string fnv1a64_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(InputError::Kind::MissingFile, path.string() + ": cannot open file");
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (std::istreambuf_iterator<char> it(in), end; it != end; ++it) {
    hash ^= static_cast<unsigned char>(*it);
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return std::string("fnv1a64:") + buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_outcomes_csv(const std::vector<std::vector<RegionOutcome>>& outcomes,
                        const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError(InputError::Kind::MissingFile, path.string() + ": cannot write");
  out << "fiducial,region,n,k,statistic\n";
  for (std::size_t f = 0; f < outcomes.size(); ++f) {
    for (std::size_t r = 0; r < outcomes[f].size(); ++r) {
      const auto& o = outcomes[f][r];
      out << f << ',' << r << ',' << o.n << ',' << o.k << ',' << format_number(o.statistic)
          << '\n';
    }
  }
}

std::vector<RegionOutcome> read_outcomes_csv(const fs::path& path) {
  const auto rows = read_table(path, "fiducial,region,n,k,statistic");
  std::vector<RegionOutcome> outcomes;
  outcomes.reserve(rows.size());
  std::size_t line = 2;
  for (const auto& cells : rows) {
    RegionOutcome o;
    o.n = parse_cell<std::int64_t>(cells[2], path, line);
    o.k = parse_cell<int>(cells[3], path, line);
    o.statistic = parse_cell<double>(cells[4], path, line);
    if ((o.k != 0 && o.k != 1) || o.n < 0 || !(o.statistic > 0.0 && o.statistic < 1.0)) {
      throw malformed(path.string() + ", line " + std::to_string(line) +
                      ": outcome out of range");
    }
    outcomes.push_back(o);
    ++line;
  }
  return outcomes;
}

void write_fiducial_scores_csv(const std::vector<double>& scores, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError(InputError::Kind::MissingFile, path.string() + ": cannot write");
  out << "fiducial,score\n";
  for (std::size_t i = 0; i < scores.size(); ++i) out << i << ',' << format_number(scores[i]) << '\n';
}

std::vector<double> read_fiducial_scores_csv(const fs::path& path) {
  const auto rows = read_table(path, "fiducial,score");
  std::vector<double> scores;
  scores.reserve(rows.size());
  std::size_t line = 2;
  for (const auto& cells : rows) {
    const double s = parse_cell<double>(cells[1], path, line);
    if (!(s >= 0.0 && s <= 1.0)) {
      throw malformed(path.string() + ", line " + std::to_string(line) + ": score outside [0, 1]");
    }
    scores.push_back(s);
    ++line;
  }
  return scores;
}

}  // namespace mira
