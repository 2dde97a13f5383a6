#include <CLI11.hpp>

#include <iostream>

#include "fkdet/app.hpp"
#include "fkdet/errors.hpp"

using namespace fkdet;

int main(int argc, char** argv) {
  CLI::App cli{"Fuglede-Kadison determinants, Mahler measures, entropy and L2-torsion over group rings"};
  cli.set_version_flag("--version", app::kToolVersion);

  std::string operation;
  std::string group, expr, complex_file, method, out, cache_dir, format, config;
  double tol = 0.0, theta = 0.0;
  int cap = 0;
  std::uint64_t seed = 0;
  std::size_t max_rows = 0, probe_rows = 0;
  std::vector<double> eps;

  cli.add_option("operation", operation, "fkdet (default), mahler, entropy, torsion, spectrum, selftest");
  auto* o_group = cli.add_option("--group", group, "Z, Z^d, Z/n, Z/n1 x Z/n2, H3, Z^2 theta=<t>");
  auto* o_expr = cli.add_option("--expr", expr, "ring element or matrix [[a, b], [c, d]]");
  auto* o_complex = cli.add_option("--complex-file", complex_file, "chain complex description");
  auto* o_cap = cli.add_option("--cap", cap, "largest box side length (default 64)");
  auto* o_tol = cli.add_option("--tol", tol, "convergence tolerance (default 5e-3)");
  auto* o_theta = cli.add_option("--theta", theta, "twist parameter for Z^2");
  auto* o_method = cli.add_option("--method", method, "general|positive, auto|jensen|quadrature, pseudo|laplacian|both");
  auto* o_eps = cli.add_option("--eps-sweep", eps, "regularizations, strictly decreasing")->delimiter(',');
  auto* o_out = cli.add_option("--out", out, "output prefix for .json/.csv/.svg");
  auto* o_cache = cli.add_option("--cache-dir", cache_dir, "report cache directory");
  auto* o_seed = cli.add_option("--seed", seed, "quasi-Monte Carlo seed");
  auto* o_format = cli.add_option("--format", format, "stdout format: json, csv or svg");
  auto* o_max = cli.add_option("--max-rows", max_rows, "largest section order (default 8192)");
  auto* o_probe = cli.add_option("--probe-rows", probe_rows, "full eigensolve up to this order (default 1024)");
  cli.add_option("--config", config, "key = value job file; flags override it");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? 0 : static_cast<int>(app::ExitCode::Usage);
  }

  try {
    app::JobConfig cfg;
    if (!config.empty()) cfg = app::read_config_file(config);
    if (!operation.empty()) cfg.operation = app::parse_operation(operation);
    if (o_group->count()) cfg.group = group;
    if (o_expr->count()) cfg.expr = expr;
    if (o_complex->count()) cfg.complex_file = complex_file;
    if (o_cap->count()) cfg.cap = cap;
    if (o_tol->count()) cfg.tol = tol;
    if (o_theta->count()) cfg.theta = theta;
    if (o_method->count()) cfg.method = method;
    if (o_eps->count()) cfg.eps_sweep = eps;
    if (o_out->count()) cfg.out = out;
    if (o_cache->count()) cfg.cache_dir = cache_dir;
    if (o_seed->count()) cfg.seed = seed;
    if (o_format->count()) cfg.format = format;
    if (o_max->count()) cfg.max_rows = max_rows;
    if (o_probe->count()) cfg.probe_rows = probe_rows;

    const app::RunOutcome r = app::run(cfg);
    for (const std::string& m : r.messages) std::cerr << "warning: " << m << "\n";
    if (cfg.format == "csv") {
      std::cout << r.trace_csv;
    } else if (cfg.format == "svg") {
      std::cout << r.svg;
    } else {
      std::cout << r.report_json;
    }
    std::cerr << r.summary;
    if (r.cache_hit) std::cerr << "(cached)\n";
    return static_cast<int>(r.exit_code);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return static_cast<int>(app::ExitCode::Parse);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(app::ExitCode::Usage);
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return static_cast<int>(app::ExitCode::NonConvergence);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(app::ExitCode::Usage);
  }
}
