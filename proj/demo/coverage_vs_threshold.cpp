// Analytic coverage of the reference network over a threshold grid, with the
// evaluation path used at each point.
//
//   demo_coverage [lambda_A_per_km2] [P_A_dBm]

#include <cstdio>
#include <cstdlib>

#include "hccn/coverage.hpp"

int main(int argc, char** argv) {
  hccn::NetworkParams p = hccn::reference_params();
  if (argc > 1) hccn::set_config_value(p, "lambda_A_per_km2", std::atof(argv[1]));
  if (argc > 2) hccn::set_config_value(p, "P_A_dBm", std::atof(argv[2]));
  for (const auto& e : hccn::validate(p)) {
    std::fprintf(stderr, "invalid parameters: %s\n", e.c_str());
    return 1;
  }

  const hccn::AnalyticModel model = hccn::analytic_model(p);
  std::printf("lambda_A = %g /km2, P_A = %g dBm\n", hccn::get_config_value(p, "lambda_A_per_km2"),
              hccn::get_config_value(p, "P_A_dBm"));
  std::printf("%8s  %10s  %s\n", "T [dB]", "p_c", "path");
  for (int t_db = -10; t_db <= 20; t_db += 5) {
    const hccn::CoverageReport r = hccn::coverage_report(hccn::CoverageContext(model, hccn::db_to_linear(t_db)));
    std::printf("%8d  %10.6f  %s\n", t_db, r.value, r.path().c_str());
  }
}
