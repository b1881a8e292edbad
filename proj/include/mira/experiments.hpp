#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mira/synthetic.hpp"
#include "mira/types.hpp"

namespace mira {

/// Knobs shared by every synthetic experiment. Unset sizes fall back to the
/// experiment's own defaults.
struct ExperimentOptions {
  std::optional<std::int64_t> L;
  std::optional<std::int64_t> N;
  std::int64_t regions = 100;
  std::uint64_t seed = 0;
  std::int64_t bootstrap = 200;
  unsigned threads = 1;
  Metric metric = Metric::l2();
  std::optional<CenterLaw> centers;  // default uniform:0,1
  double bias_z = synthetic::GaussianToySpec{}.bias_z;
  double gmm_mean_spread = synthetic::GmmShiftSpec{}.mean_spread;
};

struct ExperimentRow {
  std::string experiment;
  std::string configuration;
  double score = 0.0;
  std::optional<double> bootstrap_std;
  Diagnosis diagnosis = Diagnosis::ConsistentWithNull;
  std::int64_t L = 0;
  std::int64_t n_eff = 0;
};

const std::vector<std::string>& experiment_names();

/// Runs every configuration of the named experiment:
///   gaussian-toy   correct / overconfident / underconfident / biased
///   linreg         candidate noise 0.001, 0.01, 0.1, 0.15, 0.2, 0.25
///   gmm-shift      shifts -6, -3, 0, 3, 6
///   uninformative  random centers / x-dependent centers
///   disjoint       separations 0, 1, 2, 5, 10, 100
std::vector<ExperimentRow> run_experiment(const std::string& name,
                                          const ExperimentOptions& options);

/// Scoring configuration applied to every row of an experiment.
MiraConfig experiment_config(const ExperimentOptions& options);

void write_experiment_csv(const std::vector<ExperimentRow>& rows, std::ostream& out);

}  // namespace mira
