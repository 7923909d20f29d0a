// Command-line harness: runs one solver case or reproduces a published table.
#include "stokesdd/driver.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Domain-decomposition solver for the incompressible Stokes problem "
               "on the unit square (modified Taylor-Hood elements)"};

  int nsub = 4;
  int ratio = 8;
  std::string coarse = "corners";
  std::string pressure = "continuous";
  double tol = 1e-6;
  int maxit = 500;
  int table = 0;
  std::string format = "md";
  int threads = 0;
  std::string dump_dir;
  std::string residual_log;

  app.add_option("--nsub", nsub, "Subdomains per side (>= 2)");
  app.add_option("--ratio", ratio, "Pressure cells per subdomain side, H/h (>= 2)");
  app.add_option("--coarse", coarse, "Coarse velocity space")
      ->check(CLI::IsMember({"corners", "corners-edges"}));
  app.add_option("--pressure", pressure, "Pressure discretization")
      ->check(CLI::IsMember({"continuous", "discontinuous"}));
  app.add_option("--tol", tol, "CG relative residual tolerance");
  app.add_option("--maxit", maxit, "CG iteration limit");
  app.add_option("--table", table, "Reproduce one published table instead of a single case")
      ->check(CLI::Range(1, 4));
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"csv", "md", "json"}));
  app.add_option("--threads", threads,
                 "Worker threads for subdomain loops (default: STOKESDD_THREADS or 1)");
  app.add_option("--dump-matrices", dump_dir,
                 "Directory for mesh, partition, and matrix dumps (single-case mode)");
  app.add_option("--residual-log", residual_log,
                 "CSV file receiving per-iteration residuals (single-case mode)");

  CLI11_PARSE(app, argc, argv);

  try {
    const stokesdd::OutputFormat fmt = stokesdd::parse_format(format);
    if (table > 0) {
      const stokesdd::TableComparison cmp = stokesdd::run_table(table, tol, maxit, threads);
      stokesdd::print_table_comparison(std::cout, cmp, fmt);
      return cmp.all_pass() ? 0 : 1;
    }
    stokesdd::CaseConfig config;
    config.nsub = nsub;
    config.ratio = ratio;
    config.coarse = stokesdd::parse_coarse(coarse);
    config.pressure = stokesdd::parse_pressure(pressure);
    config.tol = tol;
    config.maxit = maxit;
    config.threads = threads;
    config.format = fmt;
    config.dump_dir = dump_dir;
    config.residual_log = residual_log;
    const stokesdd::CaseReport report = stokesdd::run_case(config);
    stokesdd::print_report(std::cout, report, fmt);
    return report.converged ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
