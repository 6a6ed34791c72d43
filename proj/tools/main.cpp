// surprise: objective-adaptive subsampling and Horvitz-Thompson estimation.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "surprise/armse.hpp"
#include "surprise/manifest.hpp"
#include "surprise/parallel.hpp"

namespace fs = std::filesystem;
using namespace surprise;

namespace {

struct CommonOpts {
  std::string data_path;
  std::string response;
  std::string loss = "logistic";
  std::string objective = "lcc";
  std::vector<double> direction;
  double rate = 0.01;
  std::string pilot = "uniform-mle";
  std::size_t pilot_size = 1000;
  std::string pilot_file;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  int workers = 0;
  bool standardize = false;
  double min_prob = 0.0;
  double log_offset = std::numeric_limits<double>::quiet_NaN();
};

void add_common_flags(CLI::App* cmd, CommonOpts& o, bool needs_data) {
  auto* data = cmd->add_option("--data", o.data_path, "input CSV (header row required)");
  if (needs_data) data->required();
  cmd->add_option("--response", o.response, "response column name");
  cmd->add_option("--loss", o.loss, "loss family: logistic|poisson|gaussian|probit")
      ->check(CLI::IsMember({"logistic", "poisson", "gaussian", "probit"}));
  cmd->add_option("--objective", o.objective,
                  "sampling objective: prediction|direction|mse|lcc")
      ->check(CLI::IsMember({"prediction", "direction", "mse", "lcc"}));
  cmd->add_option("--direction-vector", o.direction,
                  "target direction for --objective direction (p numbers)");
  cmd->add_option("--rate", o.rate, "target expected sampling rate in (0,1)");
  cmd->add_option("--pilot", o.pilot, "pilot method: uniform-mle|wcc|external")
      ->check(CLI::IsMember({"uniform-mle", "wcc", "external"}));
  cmd->add_option("--pilot-size", o.pilot_size, "pilot subsample size");
  cmd->add_option("--pilot-file", o.pilot_file,
                  "one-column CSV with the external pilot parameter");
  cmd->add_option("--seed", o.seed, "master RNG seed");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--workers", o.workers, "worker threads (0 = hardware)");
  cmd->add_flag("--standardize", o.standardize, "standardize covariate columns");
  cmd->add_option("--min-prob", o.min_prob, "probability floor applied after capping");
  cmd->add_option("--log-offset", o.log_offset,
                  "apply log(x + offset) to covariates before standardizing");
}

Dataset load_data(const CommonOpts& o) {
  LoadOptions load;
  if (!o.response.empty()) load.response_column = o.response;
  load.standardize = o.standardize;
  if (!std::isnan(o.log_offset)) load.log_offset = o.log_offset;
  return Dataset::load_csv(o.data_path, load);
}

Objective make_objective(const CommonOpts& o, int dim) {
  if (o.objective == "prediction") return Objective::prediction();
  if (o.objective == "mse") return Objective::mse();
  if (o.objective == "lcc") return Objective::lcc();
  if (o.direction.empty())
    throw ContractError("--objective direction requires --direction-vector");
  Vector v = Eigen::Map<const Vector>(o.direction.data(),
                                      static_cast<Eigen::Index>(o.direction.size()));
  if (v.size() != dim)
    throw ContractError("--direction-vector needs " + std::to_string(dim) + " entries");
  return Objective::estimation_direction(v);
}

Vector read_pilot_file(const std::string& path, int dim) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open pilot file: " + path);
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      values.push_back(std::stod(line));
    } catch (const std::exception&) {
      // allow a single header line
      if (values.empty()) continue;
      throw ParseError("pilot file line is not a number: '" + line + "'");
    }
  }
  if (static_cast<int>(values.size()) != dim)
    throw ContractError("pilot file has " + std::to_string(values.size()) +
                        " entries, expected " + std::to_string(dim));
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

PilotEstimate make_pilot(const CommonOpts& o, const Dataset& data, const LossModel& model,
                         Rng& rng) {
  if (o.pilot == "uniform-mle") return pilot_uniform_mle(data, model, o.pilot_size, rng);
  if (o.pilot == "wcc") return pilot_wcc(data, o.pilot_size, rng);
  return pilot_external(read_pilot_file(o.pilot_file, model.dim()), data, model);
}

void store_common_config(RunManifest& m, const CommonOpts& o) {
  m.config["data"] = o.data_path;
  m.config["response"] = o.response;
  m.config["loss"] = o.loss;
  m.config["objective"] = o.objective;
  m.config["rate"] = std::to_string(o.rate);
  m.config["pilot"] = o.pilot;
  m.config["pilot_size"] = std::to_string(o.pilot_size);
  if (!o.pilot_file.empty()) m.config["pilot_file"] = o.pilot_file;
  m.config["seed"] = std::to_string(o.seed);
  m.config["standardize"] = o.standardize ? "true" : "false";
  m.config["min_prob"] = std::to_string(o.min_prob);
  m.config["workers"] = std::to_string(worker_count());
  if (!std::isnan(o.log_offset)) m.config["log_offset"] = std::to_string(o.log_offset);
}

std::string num17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_sample(const CommonOpts& o) {
  RunManifest manifest;
  manifest.command = "sample";
  manifest.seed = o.seed;
  manifest.started_at = timestamp_utc();

  const Dataset data = load_data(o);
  LossModel model(family_from_name(o.loss), data.dim());
  Rng master(o.seed);
  Rng pilot_rng = master.substream(stream::kPilot);
  const PilotEstimate pilot = make_pilot(o, data, model, pilot_rng);

  const Objective objective = make_objective(o, model.dim());
  Vector k = kernel(data, model, pilot, objective);
  SamplingPlan plan = SamplingPlan::make(std::move(k), o.rate, o.min_prob);
  Rng draw_rng = master.substream(stream::kDraw);
  const Subsample sub = draw(plan, draw_rng);

  fs::create_directories(o.out_dir);
  const std::string plan_path = (fs::path(o.out_dir) / "plan.csv").string();
  {
    std::ofstream out(plan_path);
    out << "index,kernel,prob\n";
    for (Eigen::Index i = 0; i < plan.probs.size(); ++i)
      out << i << ',' << num17(plan.kernels(i)) << ',' << num17(plan.probs(i)) << '\n';
  }
  const std::string sub_path = (fs::path(o.out_dir) / "subsample.csv").string();
  {
    std::ofstream out(sub_path);
    if (data.has_response())
      out << (data.response_name().empty() ? "y" : data.response_name()) << ',';
    for (std::size_t j = 0; j < data.column_names().size(); ++j)
      out << data.column_names()[j] << ',';
    out << "weight\n";
    for (std::size_t k2 = 0; k2 < sub.size(); ++k2) {
      const std::size_t i = sub.indices[k2];
      if (data.has_response()) out << num17(data.response(i)) << ',';
      for (int j = 0; j < data.q(); ++j)
        out << num17(data.covariate_row(i)(j)) << ',';
      out << num17(sub.weights[k2]) << '\n';
    }
  }

  std::cout << "sampled " << sub.size() << " of " << data.size() << " rows (rate constant c="
            << (std::isinf(plan.c) ? std::string("inf") : num17(plan.c)) << ")\n";

  manifest.finished_at = timestamp_utc();
  store_common_config(manifest, o);
  manifest.add_output(plan_path);
  manifest.add_output(sub_path);
  manifest.write((fs::path(o.out_dir) / "manifest.json").string());
  return 0;
}

int cmd_fit(const CommonOpts& o) {
  RunManifest manifest;
  manifest.command = "fit";
  manifest.seed = o.seed;
  manifest.started_at = timestamp_utc();

  const Dataset data = load_data(o);
  LossModel model(family_from_name(o.loss), data.dim());
  Rng master(o.seed);
  Rng pilot_rng = master.substream(stream::kPilot);
  const PilotEstimate pilot = make_pilot(o, data, model, pilot_rng);

  const Objective objective = make_objective(o, model.dim());
  Vector k = kernel(data, model, pilot, objective);
  SamplingPlan plan = SamplingPlan::make(std::move(k), o.rate, o.min_prob);
  Rng draw_rng = master.substream(stream::kDraw);
  const Subsample sub = draw(plan, draw_rng);

  const FitResult fit = fit_ht(data, model, sub, pilot.theta_tilde);
  const auto names = coordinate_names(data);

  fs::create_directories(o.out_dir);
  const std::string est_path = (fs::path(o.out_dir) / "estimates.csv").string();
  {
    std::ofstream out(est_path);
    out << to_csv(fit, names);
  }
  std::cout << to_key_value(fit, names);

  manifest.finished_at = timestamp_utc();
  store_common_config(manifest, o);
  manifest.add_output(est_path);
  manifest.write((fs::path(o.out_dir) / "manifest.json").string());
  return 0;
}

struct SimulateOpts {
  std::string scenario = "sim1";
  std::size_t n = 0;
  std::size_t reps = 0;
  std::size_t pilot_size = 0;
  int q = 0;
  double rate = 0.0;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  int workers = 0;
};

int cmd_simulate(const SimulateOpts& o) {
  RunManifest manifest;
  manifest.command = "simulate";
  manifest.seed = o.seed;
  manifest.started_at = timestamp_utc();

  ScenarioOverrides ov;
  if (o.n) ov.n = o.n;
  if (o.reps) ov.replications = o.reps;
  if (o.pilot_size) ov.pilot_size = o.pilot_size;
  if (o.q) ov.q = o.q;
  if (o.rate > 0.0) ov.rate = o.rate;
  ov.seed = o.seed;

  const ScenarioId id = scenario_from_name(o.scenario);
  std::vector<MonteCarloSummary> summaries;
  for (const Scenario& s : scenario_variants(id, ov)) {
    std::cout << "running " << s.name << (s.scheme.empty() ? "" : " (" + s.scheme + ")")
              << ": n=" << s.n << " reps=" << s.replications << "\n";
    summaries.push_back(run(s));
    const auto& last = summaries.back();
    for (const auto& e : last.estimators)
      std::cout << "  " << e.label << ": mean wall " << e.mean_wall_ms << " ms/rep\n";
  }

  fs::create_directories(o.out_dir);
  const std::string csv_path = (fs::path(o.out_dir) / "summary.csv").string();
  const std::string txt_path = (fs::path(o.out_dir) / "summary.txt").string();
  {
    std::ofstream out(csv_path);
    out << summary_csv(summaries);
  }
  {
    std::ofstream out(txt_path);
    out << summary_table(summaries);
  }
  std::cout << summary_table(summaries);

  manifest.finished_at = timestamp_utc();
  manifest.config["scenario"] = o.scenario;
  manifest.config["n"] = std::to_string(summaries.front().n);
  manifest.config["reps"] = std::to_string(summaries.front().replications);
  manifest.config["seed"] = std::to_string(o.seed);
  manifest.config["workers"] = std::to_string(worker_count());
  manifest.add_output(csv_path);
  manifest.add_output(txt_path);
  manifest.write((fs::path(o.out_dir) / "manifest.json").string());
  return 0;
}

struct ReportOpts {
  CommonOpts common;
  int folds = 10;
  std::size_t subsample_target = 1000;
};

int cmd_report(const ReportOpts& ro) {
  const CommonOpts& o = ro.common;
  RunManifest manifest;
  manifest.command = "report";
  manifest.seed = o.seed;
  manifest.started_at = timestamp_utc();

  const Dataset data = load_data(o);
  ArmseOptions ao;
  ao.folds = ro.folds;
  ao.family = family_from_name(o.loss);
  ao.pilot.kind = PilotSpec::Kind::UniformMLE;
  ao.pilot.size = o.pilot_size;
  ao.objective = make_objective(o, data.dim());
  ao.subsample_target = ro.subsample_target;
  ao.seed = o.seed;
  const ArmseReport report = kfold_armse(data, ao);

  fs::create_directories(o.out_dir);
  const std::string path = (fs::path(o.out_dir) / "report.csv").string();
  {
    std::ofstream out(path);
    out << "method,armse";
    for (int f = 0; f < ro.folds; ++f) out << ",fold" << (f + 1);
    out << '\n';
    auto row = [&](const char* name, double mean, const std::vector<double>& folds) {
      out << name << ',' << num17(mean);
      for (const double v : folds) out << ',' << num17(v);
      out << '\n';
    };
    row("full", report.full, report.full_folds);
    row("surprise", report.surprise, report.surprise_folds);
    row("uniform", report.uniform, report.uniform_folds);
  }
  std::printf("ARMSE over %d folds (subsample %zu + pilot %zu vs uniform %zu):\n", ro.folds,
              ro.subsample_target, o.pilot_size, ro.subsample_target + o.pilot_size);
  std::printf("  full     %.6g\n  surprise %.6g\n  uniform  %.6g\n", report.full,
              report.surprise, report.uniform);

  manifest.finished_at = timestamp_utc();
  store_common_config(manifest, o);
  manifest.config["folds"] = std::to_string(ro.folds);
  manifest.config["subsample_target"] = std::to_string(ro.subsample_target);
  manifest.add_output(path);
  manifest.write((fs::path(o.out_dir) / "manifest.json").string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"surprise sampling: optimal subsampling with HT estimation"};
  app.require_subcommand(1);
  app.set_config("--config");

  CommonOpts sample_opts, fit_opts;
  SimulateOpts sim_opts;
  ReportOpts report_opts;

  auto* sample = app.add_subcommand("sample", "compute a sampling plan and draw a subsample");
  add_common_flags(sample, sample_opts, true);

  auto* fit = app.add_subcommand("fit", "pilot, sample and fit the HT estimator");
  add_common_flags(fit, fit_opts, true);

  auto* simulate = app.add_subcommand("simulate", "run a Monte-Carlo study");
  simulate->add_option("--scenario", sim_opts.scenario, "sim1..sim6")->required();
  simulate->add_option("--n", sim_opts.n, "sample size override");
  simulate->add_option("--reps", sim_opts.reps, "replication count override");
  simulate->add_option("--pilot-size", sim_opts.pilot_size, "pilot size override");
  simulate->add_option("--q", sim_opts.q, "covariate count override (sim1)");
  simulate->add_option("--rate", sim_opts.rate, "sampling rate override");
  simulate->add_option("--seed", sim_opts.seed, "master RNG seed");
  simulate->add_option("--out", sim_opts.out_dir, "output directory");
  simulate->add_option("--workers", sim_opts.workers, "worker threads (0 = hardware)");

  auto* report = app.add_subcommand("report", "k-fold ARMSE comparison on user data");
  add_common_flags(report, report_opts.common, true);
  report->add_option("--folds", report_opts.folds, "cross-validation folds");
  report->add_option("--subsample-size", report_opts.subsample_target,
                     "expected surprise subsample size per fold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sample->parsed()) {
      set_worker_count(sample_opts.workers);
      return cmd_sample(sample_opts);
    }
    if (fit->parsed()) {
      set_worker_count(fit_opts.workers);
      return cmd_fit(fit_opts);
    }
    if (simulate->parsed()) {
      set_worker_count(sim_opts.workers);
      return cmd_simulate(sim_opts);
    }
    if (report->parsed()) {
      set_worker_count(report_opts.common.workers);
      return cmd_report(report_opts);
    }
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
