// clgrid: scenario runner for the exact damped-oscillator / free-particle
// propagator. Exit codes: 0 ok, 2 config error, 3 numerical contract
// violation, 4 I/O failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "clme/parallel.hpp"
#include "clme/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Exact Caldeira-Leggett propagation and decoherence diagnostics"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  bool check = false;
  bool audit = false;
  int threads = 0;

  auto* run = app.add_subcommand("run", "Run a scenario config");
  run->add_option("config", config, "JSON scenario file")->required();
  run->add_flag("--check", check, "Compare against the method-of-lines oracle");
  run->add_flag("--audit", audit, "Run the factorization audit");
  run->add_option("--out", out_dir, "Output directory (overrides output.dir)");
  run->add_option("--threads", threads, "Worker threads (fallback: CLGRID_THREADS)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (threads <= 0) {
    if (const char* env = std::getenv("CLGRID_THREADS")) threads = std::atoi(env);
  }
  clme::set_thread_count(threads > 0 ? threads : 1);

  try {
    const auto scenario = clme::load_scenario(config);
    clme::RunOptions opts;
    opts.check = check;
    opts.audit = audit;
    if (!out_dir.empty()) opts.output_dir = out_dir;
    const auto result = clme::run_scenario(scenario, opts, std::cout);
    if (result.oracle_gap) std::cout << "max L-inf gap: " << *result.oracle_gap << "\n";
    return 0;
  } catch (const clme::Error& e) {
    std::cerr << "clgrid: " << e.what() << "\n";
    return clme::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "clgrid: " << e.what() << "\n";
    return 3;
  }
}
