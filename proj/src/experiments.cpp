#include "mira/experiments.hpp"

#include <charconv>
#include <functional>

#include "mira/errors.hpp"
#include "mira/statistic.hpp"

namespace mira {
namespace {

std::string format_number(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

ExperimentRow score_row(const std::string& experiment, const std::string& configuration,
                        const synthetic::Dataset& data, const MiraConfig& config,
                        unsigned threads) {
  const ScoreReport report = mira_score(data.source, config, threads);
  ExperimentRow row;
  row.experiment = experiment;
  row.configuration = configuration;
  row.score = report.score;
  row.bootstrap_std = report.bootstrap_std;
  row.diagnosis = report.diagnosis;
  row.L = static_cast<std::int64_t>(report.per_fiducial_scores.size());
  row.n_eff = report.n_eff;
  return row;
}

std::vector<ExperimentRow> gaussian_toy(const ExperimentOptions& o) {
  std::vector<ExperimentRow> rows;
  const MiraConfig config = experiment_config(o);
  for (auto mode : {synthetic::ToyMode::Correct, synthetic::ToyMode::Overconfident,
                    synthetic::ToyMode::Underconfident, synthetic::ToyMode::Biased}) {
    synthetic::GaussianToySpec spec;
    spec.mode = mode;
    spec.L = o.L.value_or(1000);
    spec.N = o.N.value_or(500);
    spec.seed = o.seed;
    spec.bias_z = o.bias_z;
    rows.push_back(score_row("gaussian-toy", synthetic::to_string(mode),
                             synthetic::gen_gaussian_toy(spec), config, o.threads));
  }
  return rows;
}

std::vector<ExperimentRow> linreg(const ExperimentOptions& o) {
  std::vector<ExperimentRow> rows;
  const MiraConfig config = experiment_config(o);
  for (double noise : {0.001, 0.01, 0.1, 0.15, 0.2, 0.25}) {
    synthetic::LinRegSpec spec;
    spec.noise_sigma = noise;
    spec.L = o.L.value_or(5000);
    spec.N = o.N.value_or(5000);
    spec.seed = o.seed;
    rows.push_back(score_row("linreg", "noise=" + format_number(noise),
                             synthetic::gen_linreg(spec), config, o.threads));
  }
  return rows;
}

std::vector<ExperimentRow> gmm_shift(const ExperimentOptions& o) {
  std::vector<ExperimentRow> rows;
  const MiraConfig config = experiment_config(o);
  for (double shift : {-6.0, -3.0, 0.0, 3.0, 6.0}) {
    synthetic::GmmShiftSpec spec;
    spec.shift = shift;
    spec.L = o.L.value_or(5000);
    spec.N = o.N.value_or(5000);
    spec.seed = o.seed;
    spec.mean_spread = o.gmm_mean_spread;
    rows.push_back(score_row("gmm-shift", "shift=" + format_number(shift),
                             synthetic::gen_gmm_shift(spec), config, o.threads));
  }
  return rows;
}

std::vector<ExperimentRow> uninformative(const ExperimentOptions& o) {
  synthetic::UninformativeSpec spec;
  spec.L = o.L.value_or(1000);
  spec.N = o.N.value_or(1000);
  spec.seed = o.seed;
  const synthetic::Dataset data = synthetic::gen_uninformative(spec);

  std::vector<ExperimentRow> rows;
  rows.push_back(score_row("uninformative", "random", data, experiment_config(o), o.threads));

  // x-dependent centers are offsets in the raw observation scale, so this
  // configuration scores unnormalized samples.
  MiraConfig xdep = experiment_config(o);
  xdep.region_spec.centers = XDependentCenters(-0.05, 0.05);
  xdep.normalize = false;
  rows.push_back(score_row("uninformative", "x_dependent", data, xdep, o.threads));
  return rows;
}

std::vector<ExperimentRow> disjoint(const ExperimentOptions& o) {
  std::vector<ExperimentRow> rows;
  const MiraConfig config = experiment_config(o);
  for (double separation : {0.0, 1.0, 2.0, 5.0, 10.0, 100.0}) {
    synthetic::DisjointSpec spec;
    spec.separation = separation;
    spec.L = o.L.value_or(1000);
    spec.N = o.N.value_or(500);
    spec.seed = o.seed;
    rows.push_back(score_row("disjoint", "separation=" + format_number(separation),
                             synthetic::gen_disjoint(spec), config, o.threads));
  }
  return rows;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"gaussian-toy", "linreg", "gmm-shift",
                                                 "uninformative", "disjoint"};
  return names;
}

MiraConfig experiment_config(const ExperimentOptions& options) {
  MiraConfig config;
  config.region_spec.metric = options.metric;
  config.region_spec.centers = options.centers.value_or(CenterLaw::uniform(0.0, 1.0));
  config.region_spec.regions_per_fiducial = options.regions;
  config.seed = options.seed;
  config.bootstrap_iterations = options.bootstrap;
  config.compute_gof = false;
  config.validate();
  return config;
}

std::vector<ExperimentRow> run_experiment(const std::string& name,
                                          const ExperimentOptions& options) {
  using Runner = std::function<std::vector<ExperimentRow>(const ExperimentOptions&)>;
  static const std::vector<std::pair<std::string, Runner>> runners = {
      {"gaussian-toy", gaussian_toy},   {"linreg", linreg},     {"gmm-shift", gmm_shift},
      {"uninformative", uninformative}, {"disjoint", disjoint},
  };
  for (const auto& [key, run] : runners) {
    if (key == name) return run(options);
  }
  throw invalid_argument("unknown experiment '" + name +
                         "' (expected gaussian-toy, linreg, gmm-shift, uninformative or disjoint)");
}

void write_experiment_csv(const std::vector<ExperimentRow>& rows, std::ostream& out) {
  out << "experiment,configuration,score,bootstrap_std,diagnosis,L,n_eff\n";
  for (const auto& r : rows) {
    out << r.experiment << ',' << r.configuration << ',' << format_number(r.score) << ','
        << (r.bootstrap_std ? format_number(*r.bootstrap_std) : std::string()) << ','
        << to_string(r.diagnosis) << ',' << r.L << ',' << r.n_eff << '\n';
  }
}

}  // namespace mira
