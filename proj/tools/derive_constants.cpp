// Regenerates the pinned scenario constants (calibrated intercepts and
// misspecified-model targets) printed as C++ table entries for
// src/sim_constants.cpp. Slow: the oracle fits use 10^7-row samples.

#include <cstdio>

#include "surprise/montecarlo.hpp"

using namespace surprise;

namespace {

void print_intercept(const GeneratorSpec& spec, double target, double value) {
  std::printf("      {\"%s\", {%.12g, %.12g}},\n", spec.key().c_str(), target, value);
}

void print_target(const GeneratorSpec& spec) {
  const OracleTarget t = derive_oracle_target(spec, kOracleSampleSize, kOracleSeed);
  std::printf("      {\"%s\",\n       {{", spec.full_key().c_str());
  for (int j = 0; j < t.theta_star.size(); ++j)
    std::printf("%s%.12g", j ? ", " : "", t.theta_star(j));
  std::printf("},\n        {");
  for (int j = 0; j < t.mc_se.size(); ++j) std::printf("%s%.3g", j ? ", " : "", t.mc_se(j));
  std::printf("}}},\n");
  std::fflush(stdout);
}

GeneratorSpec sim1_gen(int q) {
  GeneratorSpec gen;
  gen.working_family = Family::Logistic;
  gen.q = q;
  gen.slopes = Vector::Zero(q);
  for (int j = 0; j < q / 2; ++j) gen.slopes(j) = 1.0;
  return gen;
}

}  // namespace

int main() {
  std::printf("  // ---- intercept_table entries ----\n");

  for (const int q : {50, 20}) {
    GeneratorSpec gen = sim1_gen(q);
    const double a = calibrate_intercept(gen, 0.10);
    print_intercept(gen, 0.10, a);
  }

  GeneratorSpec quad;
  quad.working_family = Family::Logistic;
  quad.q = 5;
  quad.slopes = Vector::Ones(5);
  quad.quad_coef = 1.0;
  print_intercept(quad, 0.01, calibrate_intercept(quad, 0.01));

  GeneratorSpec pois;
  pois.working_family = Family::PoissonLog;
  pois.q = 2;
  pois.slopes = Vector::Constant(2, 1.0);
  for (const double g : {0.0, 0.5}) {
    pois.quad_coef = g;
    print_intercept(pois, 0.93, calibrate_intercept(pois, 0.93));
  }

  std::printf("  // ---- target_table entries ----\n");

  quad.intercept = calibrate_intercept(quad, 0.01);
  print_target(quad);

  pois.quad_coef = 0.5;
  pois.intercept = calibrate_intercept(pois, 0.93);
  print_target(pois);

  GeneratorSpec gauss;
  gauss.working_family = Family::GaussianLinear;
  gauss.q = 2;
  gauss.slopes = Vector::Constant(2, 1.0);
  gauss.quad_coef = 1.0;
  gauss.x_sd = 0.1;
  gauss.noise_sd = 0.1;
  gauss.intercept = 0.0;
  print_target(gauss);

  return 0;
}
