#include "mira/types.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace mira {
namespace {

std::string lower(std::string text) {
  for (auto& c : text) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return text;
}

double parse_real(const std::string& text, const std::string& context) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(value)) {
    throw invalid_argument("cannot parse number '" + text + "' in " + context);
  }
  return value;
}

std::pair<double, double> parse_pair(const std::string& text, const std::string& context) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw invalid_argument("expected two comma-separated numbers in " + context);
  }
  return {parse_real(text.substr(0, comma), context),
          parse_real(text.substr(comma + 1), context)};
}

std::string format_real(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

SampleMatrix::SampleMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw InputError(InputError::Kind::DimensionMismatch,
                     "sample matrix storage does not match its shape");
  }
}

SampleMatrix SampleMatrix::from_rows(const std::vector<Vector>& rows) {
  if (rows.empty()) return {};
  SampleMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) {
      throw InputError(InputError::Kind::DimensionMismatch,
                       "row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                           " columns, expected " + std::to_string(m.cols()));
    }
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

SamplePool::SamplePool(SampleMatrix samples, std::int64_t fiducial_index)
    : samples_(std::move(samples)), fiducial_index_(fiducial_index) {
  if (samples_.rows() < 2) {
    throw invalid_argument("sample pool for fiducial " + std::to_string(fiducial_index) +
                           " needs at least 2 rows, got " + std::to_string(samples_.rows()));
  }
  for (double v : samples_.data()) {
    if (!std::isfinite(v)) {
      throw InputError(InputError::Kind::NonFinite, "sample pool for fiducial " +
                                                        std::to_string(fiducial_index) +
                                                        " contains a non-finite value");
    }
  }
}

Metric Metric::minkowski(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw invalid_argument("Minkowski order must be a positive finite number");
  }
  return {Kind::Minkowski, p};
}

Metric Metric::parse(const std::string& text) {
  const std::string t = lower(text);
  if (t == "l2" || t == "euclidean") return l2();
  if (t == "l1" || t == "manhattan") return l1();
  if (t == "chebyshev" || t == "linf") return chebyshev();
  if (t == "cosine") return cosine();
  if (t.rfind("minkowski:", 0) == 0) return minkowski(parse_real(t.substr(10), "--metric"));
  throw invalid_argument("unknown metric '" + text +
                         "' (expected l2, l1, chebyshev, cosine or minkowski:<p>)");
}

std::string Metric::to_string() const {
  switch (kind) {
    case Kind::L2: return "l2";
    case Kind::L1: return "l1";
    case Kind::Chebyshev: return "chebyshev";
    case Kind::Cosine: return "cosine";
    case Kind::Minkowski: return "minkowski:" + format_real(p);
  }
  return "l2";
}

CenterLaw CenterLaw::uniform(double lo, double hi) {
  if (!(lo < hi)) throw invalid_argument("uniform centers need lo < hi");
  return {Kind::Uniform, lo, hi};
}

CenterLaw CenterLaw::normal(double mean, double sd) {
  if (!(sd > 0.0)) throw invalid_argument("normal centers need sd > 0");
  return {Kind::Normal, mean, sd};
}

CenterLaw CenterLaw::beta(double alpha, double beta_) {
  if (!(alpha > 0.0) || !(beta_ > 0.0)) throw invalid_argument("beta centers need a, b > 0");
  return {Kind::Beta, alpha, beta_};
}

CenterLaw CenterLaw::parse(const std::string& text) {
  const std::string t = lower(text);
  const auto colon = t.find(':');
  if (colon == std::string::npos) {
    throw invalid_argument("center law '" + text + "' must look like kind:a,b");
  }
  const std::string kind = t.substr(0, colon);
  const auto [a, b] = parse_pair(t.substr(colon + 1), "--centers");
  if (kind == "uniform") return uniform(a, b);
  if (kind == "normal") return normal(a, b);
  if (kind == "beta") return beta(a, b);
  throw invalid_argument("unknown center law '" + kind + "' (expected uniform, normal or beta)");
}

std::string CenterLaw::to_string() const {
  const char* name = kind == Kind::Uniform ? "uniform" : kind == Kind::Normal ? "normal" : "beta";
  return std::string(name) + ":" + format_real(a) + "," + format_real(b);
}

XDependentCenters::XDependentCenters(double lo, double hi) : eps_lo(lo), eps_hi(hi) {
  if (!(lo < hi)) throw invalid_argument("x-dependent centers need eps_lo < eps_hi");
}

void RegionSpec::validate() const {
  if (regions_per_fiducial < 1) throw invalid_argument("regions per fiducial must be >= 1");
  if (metric.kind == Metric::Kind::Minkowski && !(metric.p > 0.0)) {
    throw invalid_argument("Minkowski order must be positive");
  }
  if (const auto* law = std::get_if<CenterLaw>(&centers)) {
    switch (law->kind) {
      case CenterLaw::Kind::Uniform: (void)CenterLaw::uniform(law->a, law->b); break;
      case CenterLaw::Kind::Normal: (void)CenterLaw::normal(law->a, law->b); break;
      case CenterLaw::Kind::Beta: (void)CenterLaw::beta(law->a, law->b); break;
    }
  } else {
    const auto& x = std::get<XDependentCenters>(centers);
    (void)XDependentCenters(x.eps_lo, x.eps_hi);
  }
}

PoolMode PoolMode::parse(const std::string& text) {
  const std::string t = lower(text);
  if (t == "exclusion") return exclusion();
  if (t.rfind("reserved:", 0) == 0) {
    const std::string count = t.substr(9);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), value);
    if (ec != std::errc() || ptr != count.data() + count.size() || value == 0) {
      throw invalid_argument("reserved pool mode needs a positive count, got '" + count + "'");
    }
    return reserved(value);
  }
  throw invalid_argument("unknown pool mode '" + text + "' (expected exclusion or reserved:<K>)");
}

std::string PoolMode::to_string() const {
  return kind == Kind::Exclusion ? "exclusion" : "reserved:" + std::to_string(reserved_count);
}

void MiraConfig::validate() const {
  region_spec.validate();
  if (bootstrap_iterations < 0) throw invalid_argument("bootstrap iterations must be >= 0");
  if (bootstrap_iterations == 1) throw invalid_argument("bootstrap needs B >= 2 (or 0 to disable)");
  if (!(diagnosis_z > 0.0)) throw invalid_argument("diagnosis z must be positive");
  if (pool_mode.kind == PoolMode::Kind::Reserved && pool_mode.reserved_count == 0) {
    throw invalid_argument("reserved pool mode needs a positive count");
  }
}

std::string to_string(Diagnosis d) {
  switch (d) {
    case Diagnosis::ConsistentWithNull: return "consistent_with_null";
    case Diagnosis::Overconfident: return "overconfident";
    case Diagnosis::Underconfident: return "underconfident";
  }
  return "consistent_with_null";
}

Diagnosis diagnosis_from_string(const std::string& text) {
  if (text == "consistent_with_null") return Diagnosis::ConsistentWithNull;
  if (text == "overconfident") return Diagnosis::Overconfident;
  if (text == "underconfident") return Diagnosis::Underconfident;
  throw InputError(InputError::Kind::Malformed, "unknown diagnosis '" + text + "'");
}

}  // namespace mira
