// mira: score candidate conditional samplers against joint draws from the
// truth, and run the synthetic experiments.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mira/errors.hpp"
#include "mira/experiments.hpp"
#include "mira/ingestion.hpp"
#include "mira/report.hpp"
#include "mira/resampling.hpp"
#include "mira/statistic.hpp"
#include "mira/synthetic.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

using nlohmann::json;

struct ScoreArgs {
  std::string manifest;
  std::int64_t regions = 100;
  std::string metric = "l2";
  std::string centers = "uniform:0,1";
  std::string x_dependent;
  std::uint64_t seed = 0;
  std::int64_t bootstrap = 200;
  bool no_normalize = false;
  std::string pool_mode = "exclusion";
  double z = 3.0;
  unsigned threads = 1;
  std::string out;
  std::string emit_outcomes;
  std::string emit_fiducial_scores;
  bool no_timestamp = false;
};

std::pair<double, double> parse_pair(const std::string& text, const std::string& flag) {
  const auto comma = text.find(',');
  try {
    if (comma != std::string::npos) {
      std::size_t a_used = 0, b_used = 0;
      const std::string a_text = text.substr(0, comma), b_text = text.substr(comma + 1);
      const double a = std::stod(a_text, &a_used);
      const double b = std::stod(b_text, &b_used);
      if (a_used == a_text.size() && b_used == b_text.size()) return {a, b};
    }
  } catch (const std::exception&) {
  }
  throw mira::invalid_argument(flag + " expects two comma-separated numbers, got '" + text + "'");
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw mira::InputError(mira::InputError::Kind::MissingFile, path + ": cannot write");
  out << text;
}

int run_score(const ScoreArgs& a) {
  mira::MiraConfig config;
  config.region_spec.metric = mira::Metric::parse(a.metric);
  config.region_spec.regions_per_fiducial = a.regions;
  if (!a.x_dependent.empty()) {
    const auto [lo, hi] = parse_pair(a.x_dependent, "--x-dependent-centers");
    config.region_spec.centers = mira::XDependentCenters(lo, hi);
  } else {
    config.region_spec.centers = mira::CenterLaw::parse(a.centers);
  }
  config.seed = a.seed;
  config.bootstrap_iterations = a.bootstrap;
  config.normalize = !a.no_normalize;
  config.pool_mode = mira::PoolMode::parse(a.pool_mode);
  config.diagnosis_z = a.z;
  config.keep_outcomes = !a.emit_outcomes.empty();
  config.validate();

  const auto entries = mira::load_dataset(a.manifest);
  const mira::ScoreReport report = mira::mira_score(entries, config, a.threads);

  mira::ReportMetadata meta;
  meta.timestamp = a.no_timestamp ? "" : mira::utc_timestamp();
  meta.manifest_hash = mira::fnv1a64_file(a.manifest);
  write_output(a.out, mira::make_report_document(report, meta).dump(2) + "\n");

  if (!a.emit_outcomes.empty()) mira::write_outcomes_csv(report.outcomes, a.emit_outcomes);
  if (!a.emit_fiducial_scores.empty()) {
    mira::write_fiducial_scores_csv(report.per_fiducial_scores, a.emit_fiducial_scores);
  }
  return kExitOk;
}

int run_gof(const std::string& outcomes_path) {
  const auto outcomes = mira::read_outcomes_csv(outcomes_path);
  std::vector<double> statistics;
  statistics.reserve(outcomes.size());
  for (const auto& o : outcomes) statistics.push_back(o.statistic);
  const auto all = mira::beta21_gof(statistics);
  const auto q = mira::sufficiency_statistics(outcomes);

  json doc = {{"reference_cdf", "x^2"},
              {"all", all},
              {"k1_fraction", static_cast<double>(q.size()) / static_cast<double>(outcomes.size())}};
  doc["sufficiency"] = q.empty() ? json(nullptr) : json(mira::beta21_gof(q));
  std::cout << doc.dump(2) << "\n";
  return kExitOk;
}

int run_bootstrap(const std::string& scores_path, std::int64_t B, std::uint64_t seed) {
  const auto scores = mira::read_fiducial_scores_csv(scores_path);
  if (B < 2) throw mira::invalid_argument("--B must be at least 2");
  mira::RandomStream rng = mira::derive_stream(seed, 0, 0, mira::StreamPurpose::Bootstrap);
  const auto boot = mira::bootstrap_score(scores, B, rng);
  double total = 0.0;
  for (double s : scores) total += s;
  const auto L = static_cast<std::int64_t>(scores.size());
  const json doc = {{"L", L},
                    {"B", boot.B},
                    {"score", total / static_cast<double>(L)},
                    {"bootstrap_mean", boot.mean},
                    {"bootstrap_std", boot.std},
                    {"theoretical",
                     {{"band_center", mira::TheoreticalBand::asymptotic_mean},
                      {"band_half_width", mira::TheoreticalBand::half_width(L)}}}};
  std::cout << doc.dump(2) << "\n";
  return kExitOk;
}

struct GenerateArgs {
  std::string name;
  std::string out;
  std::optional<std::int64_t> L;
  std::optional<std::int64_t> N;
  std::uint64_t seed = 0;
  std::string mode = "correct";
  double bias_z = mira::synthetic::GaussianToySpec{}.bias_z;
  double noise = 0.001;
  double shift = 0.0;
  std::int64_t dim = 0;
  double separation = 100.0;
  bool exact_posterior = false;
};

int run_generate(const GenerateArgs& g) {
  namespace syn = mira::synthetic;
  std::optional<syn::Dataset> data;
  if (g.name == "gaussian-toy") {
    syn::GaussianToySpec s;
    s.mode = syn::toy_mode_from_string(g.mode);
    s.L = g.L.value_or(s.L);
    s.N = g.N.value_or(s.N);
    s.seed = g.seed;
    s.bias_z = g.bias_z;
    data = syn::gen_gaussian_toy(s);
  } else if (g.name == "linreg") {
    syn::LinRegSpec s;
    s.noise_sigma = g.noise;
    s.L = g.L.value_or(s.L);
    s.N = g.N.value_or(s.N);
    s.seed = g.seed;
    data = syn::gen_linreg(s);
  } else if (g.name == "gmm-shift") {
    syn::GmmShiftSpec s;
    s.shift = g.shift;
    if (g.dim > 0) s.dim = g.dim;
    s.L = g.L.value_or(s.L);
    s.N = g.N.value_or(s.N);
    s.seed = g.seed;
    data = syn::gen_gmm_shift(s);
  } else if (g.name == "uninformative") {
    syn::UninformativeSpec s;
    s.L = g.L.value_or(s.L);
    s.N = g.N.value_or(s.N);
    s.seed = g.seed;
    s.exact_posterior = g.exact_posterior;
    data = syn::gen_uninformative(s);
  } else if (g.name == "disjoint") {
    syn::DisjointSpec s;
    s.separation = g.separation;
    if (g.dim > 0) s.dim = g.dim;
    s.L = g.L.value_or(s.L);
    s.N = g.N.value_or(s.N);
    s.seed = g.seed;
    data = syn::gen_disjoint(s);
  } else {
    throw mira::invalid_argument("unknown generator '" + g.name + "'");
  }
  mira::write_dataset(data->source, data->d_x, data->d_y, g.out);
  std::cerr << "wrote " << data->source.size << " fiducials to " << g.out << "/manifest.json\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MIRA score: sample-based accuracy of conditional distributions"};
  app.require_subcommand(1);

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score", "Score a dataset described by a manifest");
  score_cmd->add_option("--manifest", score.manifest, "Dataset manifest (JSON)")->required();
  score_cmd->add_option("--regions", score.regions, "Regions per fiducial")->capture_default_str();
  score_cmd->add_option("--metric", score.metric, "l2 | l1 | chebyshev | cosine | minkowski:<p>")
      ->capture_default_str();
  score_cmd->add_option("--centers", score.centers, "uniform:lo,hi | normal:mean,sd | beta:a,b")
      ->capture_default_str();
  score_cmd->add_option("--x-dependent-centers", score.x_dependent,
                        "Centers at x* + U(eps_lo, eps_hi), given as eps_lo,eps_hi");
  score_cmd->add_option("--seed", score.seed, "Random seed")->envname("MIRA_SEED");
  score_cmd->add_option("--bootstrap", score.bootstrap, "Bootstrap iterations (0 disables)")
      ->capture_default_str();
  score_cmd->add_flag("--no-normalize", score.no_normalize, "Skip per-fiducial min-max scaling");
  score_cmd->add_option("--pool-mode", score.pool_mode, "exclusion | reserved:<K>")
      ->capture_default_str();
  score_cmd->add_option("--z", score.z, "Diagnosis threshold in band widths")
      ->capture_default_str();
  score_cmd->add_option("--threads", score.threads, "Worker threads")->capture_default_str();
  score_cmd->add_option("--out", score.out, "Report path (default stdout)");
  score_cmd->add_option("--emit-outcomes", score.emit_outcomes, "Write region outcomes CSV");
  score_cmd->add_option("--emit-fiducial-scores", score.emit_fiducial_scores,
                        "Write per-fiducial scores CSV");
  score_cmd->add_flag("--no-timestamp", score.no_timestamp, "Leave the timestamp field empty");

  std::string outcomes_path;
  auto* gof_cmd = app.add_subcommand("gof", "Beta(2,1) goodness of fit of region outcomes");
  gof_cmd->add_option("--outcomes", outcomes_path, "Outcome CSV from score --emit-outcomes")
      ->required();

  std::string scores_path;
  std::int64_t boot_b = 200;
  std::uint64_t boot_seed = 0;
  auto* boot_cmd = app.add_subcommand("bootstrap", "Bootstrap band from per-fiducial scores");
  boot_cmd->add_option("--scores", scores_path, "CSV from score --emit-fiducial-scores")
      ->required();
  boot_cmd->add_option("--B", boot_b, "Bootstrap iterations")->capture_default_str();
  boot_cmd->add_option("--seed", boot_seed, "Random seed")->envname("MIRA_SEED");

  std::string experiment_name;
  std::string experiment_out;
  std::string experiment_metric = "l2";
  std::string experiment_centers;
  std::optional<std::int64_t> experiment_L, experiment_N;
  mira::ExperimentOptions experiment;
  auto* exp_cmd = app.add_subcommand("experiment", "Run a synthetic experiment and emit a CSV table");
  exp_cmd->add_option("name", experiment_name,
                      "gaussian-toy | linreg | gmm-shift | uninformative | disjoint")
      ->required();
  exp_cmd->add_option("--L", experiment_L, "Fiducials per configuration");
  exp_cmd->add_option("--N", experiment_N, "Candidate samples per fiducial");
  exp_cmd->add_option("--regions", experiment.regions, "Regions per fiducial")
      ->capture_default_str();
  exp_cmd->add_option("--seed", experiment.seed, "Random seed")->envname("MIRA_SEED");
  exp_cmd->add_option("--threads", experiment.threads, "Worker threads")->capture_default_str();
  exp_cmd->add_option("--bootstrap", experiment.bootstrap, "Bootstrap iterations")
      ->capture_default_str();
  exp_cmd->add_option("--metric", experiment_metric, "Region metric")->capture_default_str();
  exp_cmd->add_option("--centers", experiment_centers, "Center law (default uniform:0,1)");
  exp_cmd->add_option("--bias-z", experiment.bias_z, "Gaussian toy biased-mode multiplier")
      ->capture_default_str();
  exp_cmd->add_option("--gmm-mean-spread", experiment.gmm_mean_spread,
                      "Standard deviation of the GMM component means")
      ->capture_default_str();
  exp_cmd->add_option("--out", experiment_out, "CSV path (default stdout)");

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic dataset directory");
  gen_cmd->add_option("name", gen.name,
                      "gaussian-toy | linreg | gmm-shift | uninformative | disjoint")
      ->required();
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--L", gen.L, "Fiducials");
  gen_cmd->add_option("--N", gen.N, "Candidate samples per fiducial");
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->envname("MIRA_SEED");
  gen_cmd->add_option("--mode", gen.mode, "Gaussian toy mode")->capture_default_str();
  gen_cmd->add_option("--bias-z", gen.bias_z, "Gaussian toy biased-mode multiplier")
      ->capture_default_str();
  gen_cmd->add_option("--noise", gen.noise, "Linear regression candidate noise")
      ->capture_default_str();
  gen_cmd->add_option("--shift", gen.shift, "GMM shift per coordinate")->capture_default_str();
  gen_cmd->add_option("--dim", gen.dim, "Dimension (gmm-shift, disjoint)");
  gen_cmd->add_option("--separation", gen.separation, "Disjoint fixture separation")
      ->capture_default_str();
  gen_cmd->add_flag("--exact-posterior", gen.exact_posterior,
                    "Uninformative fixture: sample the true posterior instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*score_cmd) return run_score(score);
    if (*gof_cmd) return run_gof(outcomes_path);
    if (*boot_cmd) return run_bootstrap(scores_path, boot_b, boot_seed);
    if (*gen_cmd) return run_generate(gen);
    if (*exp_cmd) {
      experiment.L = experiment_L;
      experiment.N = experiment_N;
      experiment.metric = mira::Metric::parse(experiment_metric);
      if (!experiment_centers.empty()) experiment.centers = mira::CenterLaw::parse(experiment_centers);
      const auto rows = mira::run_experiment(experiment_name, experiment);
      std::ostringstream csv;
      mira::write_experiment_csv(rows, csv);
      write_output(experiment_out, csv.str());
      return kExitOk;
    }
  } catch (const mira::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const mira::DegenerateRegionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
