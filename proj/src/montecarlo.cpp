#include "surprise/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "surprise/parallel.hpp"

namespace surprise {

ScenarioId scenario_from_name(const std::string& name) {
  if (name == "sim1") return ScenarioId::Sim1;
  if (name == "sim2") return ScenarioId::Sim2;
  if (name == "sim3") return ScenarioId::Sim3;
  if (name == "sim4") return ScenarioId::Sim4;
  if (name == "sim5") return ScenarioId::Sim5;
  if (name == "sim6") return ScenarioId::Sim6;
  if (name == "custom") return ScenarioId::Custom;
  throw ContractError("unknown scenario: " + name);
}

std::string scenario_name(ScenarioId id) {
  switch (id) {
    case ScenarioId::Sim1: return "sim1";
    case ScenarioId::Sim2: return "sim2";
    case ScenarioId::Sim3: return "sim3";
    case ScenarioId::Sim4: return "sim4";
    case ScenarioId::Sim5: return "sim5";
    case ScenarioId::Sim6: return "sim6";
    case ScenarioId::Custom: return "custom";
  }
  return "?";
}

std::string PilotSpec::name() const {
  switch (kind) {
    case Kind::UniformMLE: return "uniform-mle";
    case Kind::WCC: return "wcc";
    case Kind::ProbitMLE: return "probit-mle";
    case Kind::ExternalVector: return "external";
  }
  return "?";
}

EstimatorSpec EstimatorSpec::full_mle() {
  EstimatorSpec s;
  s.kind = Kind::FullMLE;
  s.label = "full-mle";
  return s;
}

EstimatorSpec EstimatorSpec::uniform_sub_mle(std::size_t budget) {
  EstimatorSpec s;
  s.kind = Kind::UniformSubMLE;
  s.budget = budget;
  s.label = "sub-mle";
  return s;
}

EstimatorSpec EstimatorSpec::ht(Objective objective, std::string label) {
  EstimatorSpec s;
  s.kind = Kind::HT;
  s.objective = std::move(objective);
  s.label = label.empty() ? "ht-" + s.objective.name() : std::move(label);
  return s;
}

EstimatorSpec EstimatorSpec::lcc_adjusted() {
  EstimatorSpec s;
  s.kind = Kind::LCCAdjusted;
  s.label = "lcc";
  return s;
}

PilotEstimate pilot_probit_mle(const Dataset& data, const LossModel& target_model,
                               std::size_t pilot_size, Rng& rng) {
  if (pilot_size == 0 || pilot_size > data.size())
    throw ContractError("probit pilot size out of range");
  std::vector<Index> idx = sample_without_replacement(data.size(), pilot_size, rng);
  LossModel probit(Family::Probit, data.dim());
  WeightedRisk risk(data, probit, std::move(idx));
  Vector theta;
  SolverReport report;
  try {
    std::tie(theta, report) = newton_minimize(risk, Vector::Zero(probit.dim()));
  } catch (const SolverError& e) {
    throw PilotError(std::string("probit pilot: ") + e.what(), e.report());
  }
  if (!report.converged)
    throw PilotError("probit pilot did not converge", report);
  PilotEstimate pilot = pilot_external(theta, data, target_model);
  pilot.pilot_size = pilot_size;
  return pilot;
}

namespace {

Vector half_ones(int q) {
  Vector slopes = Vector::Zero(q);
  for (int j = 0; j < q / 2; ++j) slopes(j) = 1.0;
  return slopes;
}

GeneratorSpec quadratic_logistic_spec() {
  GeneratorSpec gen;
  gen.working_family = Family::Logistic;
  gen.q = 5;
  gen.slopes = Vector::Ones(5);
  gen.quad_coef = 1.0;
  gen.x_sd = 1.0;
  gen.intercept = calibrate_intercept(gen, 0.01);
  return gen;
}

}  // namespace

Scenario make_scenario(ScenarioId id, bool misspec_variant, const ScenarioOverrides& o) {
  Scenario s;
  s.id = id;
  s.name = scenario_name(id);
  s.n = 100000;
  s.replications = 500;
  s.seed = 1;

  switch (id) {
    case ScenarioId::Sim1: {
      const int q = o.q.value_or(50);
      if (q < 2 || q % 2 != 0) throw ContractError("sim1 needs an even q >= 2");
      s.gen.working_family = Family::Logistic;
      s.gen.q = q;
      s.gen.slopes = half_ones(q);
      s.gen.quad_coef = 0.0;
      s.gen.intercept = calibrate_intercept(s.gen, 0.10);
      s.pilot = {PilotSpec::Kind::UniformMLE, 2000, {}};
      s.rate = {RatePolicy::Kind::NativeLCC, 0.0};
      s.estimators = {EstimatorSpec::lcc_adjusted(),
                      EstimatorSpec::ht(Objective::lcc(), "ht-lcc")};
      break;
    }
    case ScenarioId::Sim2:
    case ScenarioId::Sim3:
    case ScenarioId::Sim4: {
      s.gen = quadratic_logistic_spec();
      s.pilot = {id == ScenarioId::Sim3 ? PilotSpec::Kind::ProbitMLE
                                        : PilotSpec::Kind::UniformMLE,
                 5000,
                 {}};
      s.rate = {RatePolicy::Kind::NativeLCC, 0.0};
      s.estimators = {EstimatorSpec::lcc_adjusted(),
                      EstimatorSpec::ht(Objective::lcc(), "ht-lcc")};
      if (id == ScenarioId::Sim4) {
        Vector v = Vector::Zero(s.gen.q + 1);
        v(1) = 1.0;  // the first slope, intercept leading
        s.estimators.push_back(
            EstimatorSpec::ht(Objective::estimation_direction(v), "ht-optimal"));
      }
      break;
    }
    case ScenarioId::Sim5: {
      s.gen.working_family = Family::PoissonLog;
      s.gen.q = 2;
      s.gen.slopes = Vector::Constant(2, 1.0);
      s.gen.quad_coef = misspec_variant ? 0.5 : 0.0;
      s.gen.intercept = calibrate_intercept(s.gen, 0.93);
      s.scheme = misspec_variant ? "incorrect" : "correct";
      s.pilot = {PilotSpec::Kind::UniformMLE, 1000, {}};
      s.rate = {RatePolicy::Kind::Fixed, 1000.0 / static_cast<double>(s.n)};
      s.estimators = {EstimatorSpec::uniform_sub_mle(2000),
                      EstimatorSpec::ht(Objective::lcc(), "ht")};
      break;
    }
    case ScenarioId::Sim6: {
      s.gen.working_family = Family::GaussianLinear;
      s.gen.q = 2;
      s.gen.slopes = Vector::Constant(2, 1.0);
      s.gen.quad_coef = misspec_variant ? 1.0 : 0.0;
      s.gen.x_sd = 0.1;
      s.gen.noise_sd = 0.1;
      s.gen.intercept = 0.0;  // P(-0.5<Y<0.5) = 99.6% by construction
      s.scheme = misspec_variant ? "incorrect" : "correct";
      s.pilot = {PilotSpec::Kind::UniformMLE, 1000, {}};
      s.rate = {RatePolicy::Kind::Fixed, 1000.0 / static_cast<double>(s.n)};
      s.estimators = {EstimatorSpec::uniform_sub_mle(2000),
                      EstimatorSpec::ht(Objective::lcc(), "ht")};
      break;
    }
    case ScenarioId::Custom:
      throw ContractError("custom scenarios are built directly, not via make_scenario");
  }

  if (o.n) s.n = *o.n;
  if (o.replications) s.replications = *o.replications;
  if (o.pilot_size) s.pilot.size = *o.pilot_size;
  if (o.seed) s.seed = *o.seed;
  if (o.rate) s.rate = {RatePolicy::Kind::Fixed, *o.rate};
  if ((id == ScenarioId::Sim5 || id == ScenarioId::Sim6) && o.n && !o.rate)
    s.rate.rate = 1000.0 / static_cast<double>(s.n);
  if (s.n < s.pilot.size) throw ContractError("scenario n is smaller than the pilot size");
  if (s.replications < 1) throw ContractError("scenario needs at least one replication");
  return s;
}

std::vector<Scenario> scenario_variants(ScenarioId id, const ScenarioOverrides& o) {
  if (id == ScenarioId::Sim5 || id == ScenarioId::Sim6)
    return {make_scenario(id, false, o), make_scenario(id, true, o)};
  return {make_scenario(id, false, o)};
}

const EstimatorSummary& MonteCarloSummary::estimator(const std::string& label) const {
  for (const auto& e : estimators)
    if (e.label == label) return e;
  throw ContractError("no estimator labelled '" + label + "' in this summary");
}

namespace {

struct RepOutcome {
  bool failed = false;
  std::string reason;
  std::vector<Vector> estimates;
  std::vector<Vector> var_diag;             // empty vector when absent
  std::vector<std::vector<unsigned char>> covered;  // empty when no inference
  std::vector<double> fraction;
  std::vector<double> wall_ms;
};

constexpr std::uint64_t kRepTag = 0x5157ab1eULL;

}  // namespace

MonteCarloSummary run(const Scenario& scenario) {
  const std::size_t reps = scenario.replications;
  const std::size_t n_est = scenario.estimators.size();
  if (n_est == 0) throw ContractError("scenario has no estimators");

  const OracleTarget target = true_target(scenario.gen);
  const Vector& theta_star = target.theta_star;
  const int p = scenario.gen.q + 1;

  // Designs in first-appearance order; estimators refer to them by index.
  std::vector<Objective> designs;
  std::vector<int> design_of(n_est, -1);
  for (std::size_t e = 0; e < n_est; ++e) {
    const auto& spec = scenario.estimators[e];
    Objective obj;
    if (spec.kind == EstimatorSpec::Kind::HT)
      obj = spec.objective;
    else if (spec.kind == EstimatorSpec::Kind::LCCAdjusted)
      obj = Objective::lcc();
    else
      continue;
    int found = -1;
    for (std::size_t d = 0; d < designs.size(); ++d) {
      if (designs[d].kind == obj.kind &&
          (obj.kind != Objective::Kind::EstimationDirection ||
           designs[d].direction == obj.direction)) {
        found = static_cast<int>(d);
        break;
      }
    }
    if (found < 0) {
      designs.push_back(obj);
      found = static_cast<int>(designs.size()) - 1;
    }
    design_of[e] = found;
  }
  const bool need_lcc_rate = scenario.rate.kind == RatePolicy::Kind::NativeLCC;

  std::vector<RepOutcome> outcomes(reps);

  for_indices(reps, [&](std::size_t rep) {
    RepOutcome& out = outcomes[rep];
    const std::uint64_t rep_seed = derive_seed(scenario.seed, kRepTag, rep);
    try {
      Rng gen_rng(derive_seed(rep_seed, stream::kGenerate));
      const Dataset data = generate(scenario.gen, scenario.n, gen_rng);
      LossModel model(scenario.gen.working_family, data.dim());

      Rng pilot_rng(derive_seed(rep_seed, stream::kPilot));
      PilotEstimate pilot;
      switch (scenario.pilot.kind) {
        case PilotSpec::Kind::UniformMLE:
          pilot = pilot_uniform_mle(data, model, scenario.pilot.size, pilot_rng);
          break;
        case PilotSpec::Kind::WCC:
          pilot = pilot_wcc(data, scenario.pilot.size, pilot_rng);
          break;
        case PilotSpec::Kind::ProbitMLE:
          pilot = pilot_probit_mle(data, model, scenario.pilot.size, pilot_rng);
          break;
        case PilotSpec::Kind::ExternalVector:
          pilot = pilot_external(scenario.pilot.external, data, model);
          break;
      }

      // Kernels per design; the LCC kernels may also fix the rate.
      std::vector<Vector> kernels(designs.size());
      double rate = scenario.rate.rate;
      for (std::size_t d = 0; d < designs.size(); ++d)
        kernels[d] = kernel(data, model, pilot, designs[d]);
      if (need_lcc_rate) {
        int lcc_design = -1;
        for (std::size_t d = 0; d < designs.size(); ++d)
          if (designs[d].kind == Objective::Kind::LCC) lcc_design = static_cast<int>(d);
        Vector lcc_k = lcc_design >= 0 ? kernels[static_cast<std::size_t>(lcc_design)]
                                       : kernel(data, model, pilot, Objective::lcc());
        rate = std::min(lcc_k.mean(), 1.0 - 1e-9);
        if (rate <= 0.0) throw DegenerateDesignError("native LCC rate is zero");
      }

      std::vector<Subsample> subs(designs.size());
      for (std::size_t d = 0; d < designs.size(); ++d) {
        SamplingPlan plan = SamplingPlan::make(std::move(kernels[d]), rate);
        Rng draw_rng(derive_seed(rep_seed, stream::kDraw, d));
        subs[d] = draw(plan, draw_rng);
      }

      out.estimates.resize(n_est);
      out.var_diag.resize(n_est);
      out.covered.resize(n_est);
      out.fraction.assign(n_est, 0.0);
      out.wall_ms.assign(n_est, 0.0);

      for (std::size_t e = 0; e < n_est; ++e) {
        const auto& spec = scenario.estimators[e];
        const auto t0 = std::chrono::steady_clock::now();
        switch (spec.kind) {
          case EstimatorSpec::Kind::FullMLE: {
            WeightedRisk risk(data, model);
            auto [theta, report] = newton_minimize(risk, pilot.theta_tilde);
            if (!report.converged) throw FitError("full MLE did not converge", report);
            out.estimates[e] = theta;
            out.fraction[e] = 1.0;
            break;
          }
          case EstimatorSpec::Kind::UniformSubMLE: {
            Rng sub_rng(derive_seed(rep_seed, stream::kDraw, 1000 + e));
            std::vector<Index> idx =
                sample_without_replacement(data.size(), spec.budget, sub_rng);
            WeightedRisk risk(data, model, std::move(idx));
            auto [theta, report] = newton_minimize(risk, pilot.theta_tilde);
            if (!report.converged)
              throw FitError("uniform subsample MLE did not converge", report);
            out.estimates[e] = theta;
            out.fraction[e] =
                static_cast<double>(spec.budget) / static_cast<double>(data.size());
            break;
          }
          case EstimatorSpec::Kind::HT: {
            const auto& sub = subs[static_cast<std::size_t>(design_of[e])];
            FitResult fit = fit_ht(data, model, sub, pilot.theta_tilde);
            out.estimates[e] = fit.theta_hat;
            out.fraction[e] =
                static_cast<double>(sub.size()) / static_cast<double>(data.size());
            if (fit.covariance) {
              out.var_diag[e] = fit.covariance->diagonal();
              auto& cov = out.covered[e];
              cov.resize(static_cast<std::size_t>(p));
              for (int j = 0; j < p; ++j) {
                const auto [lo, hi] = fit.wald_ci[static_cast<std::size_t>(j)];
                cov[static_cast<std::size_t>(j)] =
                    (theta_star(j) >= lo && theta_star(j) <= hi) ? 1 : 0;
              }
            }
            break;
          }
          case EstimatorSpec::Kind::LCCAdjusted: {
            const auto& sub = subs[static_cast<std::size_t>(design_of[e])];
            out.estimates[e] = lcc_adjusted_fit(data, sub, pilot);
            out.fraction[e] =
                static_cast<double>(sub.size()) / static_cast<double>(data.size());
            break;
          }
        }
        const auto t1 = std::chrono::steady_clock::now();
        out.wall_ms[e] = std::chrono::duration<double, std::milli>(t1 - t0).count();
      }
    } catch (const ContractError&) {
      throw;  // a contract violation is a bug, not a sampling accident
    } catch (const Error& e) {
      out.failed = true;
      out.reason = e.what();
    }
  });

  std::size_t failed = 0;
  for (const auto& o : outcomes)
    if (o.failed) ++failed;
  if (static_cast<double>(failed) > 0.05 * static_cast<double>(reps)) {
    std::string first;
    for (const auto& o : outcomes)
      if (o.failed) {
        first = o.reason;
        break;
      }
    throw Error("replication failure rate " + std::to_string(failed) + "/" +
                std::to_string(reps) + " exceeds 5% (first failure: " + first + ")");
  }
  const std::size_t used = reps - failed;
  if (used == 0) throw Error("no successful replications");
  if (used == 1)
    std::cerr << "warning: single-replication summary; variances are degenerate zeros\n";

  MonteCarloSummary summary;
  summary.scenario_name = scenario.name;
  summary.scheme = scenario.scheme;
  summary.n = scenario.n;
  summary.replications = reps;
  summary.failed_reps = failed;
  summary.seed = scenario.seed;
  summary.theta_star = theta_star;

  for (std::size_t e = 0; e < n_est; ++e) {
    EstimatorSummary es;
    es.label = scenario.estimators[e].label;
    es.reps_used = used;
    es.estimates.resize(static_cast<Eigen::Index>(used), p);

    Eigen::Index row = 0;
    Vector var_accum = Vector::Zero(p);
    Vector cover_accum = Vector::Zero(p);
    std::size_t cover_count = 0, var_count = 0;
    double frac_accum = 0.0, wall_accum = 0.0;
    for (const auto& o : outcomes) {
      if (o.failed) continue;
      es.estimates.row(row++) = o.estimates[e].transpose();
      if (o.var_diag[e].size() > 0) {
        var_accum += o.var_diag[e];
        ++var_count;
      }
      if (!o.covered[e].empty()) {
        for (int j = 0; j < p; ++j) cover_accum(j) += o.covered[e][static_cast<std::size_t>(j)];
        ++cover_count;
      }
      frac_accum += o.fraction[e];
      wall_accum += o.wall_ms[e];
    }

    es.mean = es.estimates.colwise().mean();
    es.bias = es.mean - theta_star;
    es.variance = Vector::Zero(p);
    if (used > 1) {
      for (int j = 0; j < p; ++j) {
        const double m = es.mean(j);
        es.variance(j) =
            (es.estimates.col(j).array() - m).square().sum() / static_cast<double>(used - 1);
      }
    }
    if (var_count > 0) es.mean_var_estimate = var_accum / static_cast<double>(var_count);
    if (cover_count > 0)
      es.coverage_pct = 100.0 * cover_accum / static_cast<double>(cover_count);
    es.bias2_all = es.bias.squaredNorm();
    es.bias2_slopes = es.bias.tail(p - 1).squaredNorm();
    es.var_sum_all = es.variance.sum();
    es.var_sum_slopes = es.variance.tail(p - 1).sum();
    es.mean_subsample_fraction = frac_accum / static_cast<double>(used);
    es.mean_wall_ms = wall_accum / static_cast<double>(used);
    summary.estimators.push_back(std::move(es));
  }
  return summary;
}

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<std::string> coord_labels(int p) {
  std::vector<std::string> labels;
  labels.push_back("intercept");
  for (int j = 1; j < p; ++j) labels.push_back("x" + std::to_string(j));
  return labels;
}

}  // namespace

std::string summary_table(const std::vector<MonteCarloSummary>& summaries) {
  std::ostringstream out;
  for (const auto& s : summaries) {
    out << "scenario " << s.scenario_name;
    if (!s.scheme.empty()) out << " (" << s.scheme << ")";
    out << "  n=" << s.n << "  reps=" << s.replications << "  failed=" << s.failed_reps
        << "  seed=" << s.seed << "\n";
    const int p = static_cast<int>(s.theta_star.size());
    const auto labels = coord_labels(p);
    out << "  theta*:";
    for (int j = 0; j < p; ++j) out << ' ' << fmt(s.theta_star(j));
    out << "\n";
    char line[256];
    std::snprintf(line, sizeof line, "  %-12s %-10s %12s %12s %12s %8s %8s\n", "estimator",
                  "coord", "bias^2", "var", "var.est", "cp95%", "frac");
    out << line;
    for (const auto& e : s.estimators) {
      const bool compact = p > 8;  // wide models: aggregate rows only
      if (!compact) {
        for (int j = 0; j < p; ++j) {
          std::snprintf(line, sizeof line, "  %-12s %-10s %12s %12s %12s %8s %8s\n",
                        e.label.c_str(), labels[static_cast<std::size_t>(j)].c_str(),
                        fmt(e.bias(j) * e.bias(j)).c_str(), fmt(e.variance(j)).c_str(),
                        e.mean_var_estimate.size() > 0 ? fmt(e.mean_var_estimate(j)).c_str()
                                                       : "-",
                        e.coverage_pct.size() > 0 ? fmt(e.coverage_pct(j)).c_str() : "-",
                        fmt(e.mean_subsample_fraction).c_str());
          out << line;
        }
      }
      std::snprintf(line, sizeof line, "  %-12s %-10s %12s %12s %12s %8s %8s\n", e.label.c_str(),
                    "slopes", fmt(e.bias2_slopes).c_str(), fmt(e.var_sum_slopes).c_str(), "-",
                    "-", fmt(e.mean_subsample_fraction).c_str());
      out << line;
    }
    out << "\n";
  }
  return out.str();
}

std::string summary_csv(const std::vector<MonteCarloSummary>& summaries) {
  std::ostringstream out;
  out << "scenario,scheme,n,reps,failed,estimator,coordinate,mean,bias2,variance,"
         "var_estimate,coverage_pct,subsample_fraction\n";
  for (const auto& s : summaries) {
    const int p = static_cast<int>(s.theta_star.size());
    const auto labels = coord_labels(p);
    for (const auto& e : s.estimators) {
      for (int j = 0; j < p; ++j) {
        out << s.scenario_name << ',' << s.scheme << ',' << s.n << ',' << s.replications << ','
            << s.failed_reps << ',' << e.label << ',' << labels[static_cast<std::size_t>(j)]
            << ',' << fmt(e.mean(j)) << ',' << fmt(e.bias(j) * e.bias(j)) << ','
            << fmt(e.variance(j)) << ','
            << (e.mean_var_estimate.size() > 0 ? fmt(e.mean_var_estimate(j)) : "") << ','
            << (e.coverage_pct.size() > 0 ? fmt(e.coverage_pct(j)) : "") << ','
            << fmt(e.mean_subsample_fraction) << '\n';
      }
      out << s.scenario_name << ',' << s.scheme << ',' << s.n << ',' << s.replications << ','
          << s.failed_reps << ',' << e.label << ",slopes," << ',' << fmt(e.bias2_slopes) << ','
          << fmt(e.var_sum_slopes) << ",,," << fmt(e.mean_subsample_fraction) << '\n';
    }
  }
  return out.str();
}

}  // namespace surprise
