#include <iostream>

#include <CLI11.hpp>

#include "qcgaps/verify.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria 1-10"};
  qcgaps::VerifyOptions o;
  app.add_option("--R", o.R, "radius for the desk-scale regression");
  app.add_flag("--quick", o.quick, "exact pipelines only");
  app.add_flag("--full-scale", o.full_scale, "run the R=25000 reproduction as criterion 10");
  app.add_option("--full-scale-R", o.full_scale_R, "radius for criterion 10");
  app.add_option("--threads", o.threads, "worker threads");
  app.add_option("--seed", o.seed, "seed for randomized checks");
  CLI11_PARSE(app, argc, argv);

  o.progress = &std::cout;
  bool ok = true;
  for (const auto& r : qcgaps::run_verification(o)) ok = ok && r.passed;
  std::cout << (ok ? "ALL PASS" : "FAILURES PRESENT") << std::endl;
  return ok ? 0 : 1;
}
