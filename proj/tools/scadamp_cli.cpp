// Command-line driver for the sweep experiments.  Subcommands:
//   amp-sweep        message-passing solver over a lambda grid, many seeds
//   de-fixed-point   macroscopic state evolution fixed points on a grid
//   rs-sweep         replica saddle points, stability and free energy
//   phase-diagram    critical a(lambda, alpha) by bisection
//   rate-distortion  sparsity/error trade-off curves at fixed a
//   cd-compare       coordinate-descent uniqueness thresholds vs theory
// Exit codes: 0 success, 1 numerical failure, 2 usage error.

#include <CLI11.hpp>
#include <iostream>

#include "scadamp/errors.hpp"
#include "scadamp/experiments/runners.hpp"
#include "scadamp/parallel.hpp"
#include "scadamp/version.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  bool keep_journal = false;
};

void add_common(CLI::App* sub, CommonArgs* args) {
  sub->add_option("--config", args->config_path, "key = value config file")
      ->required();
  sub->add_option("--out", args->out, "output CSV path (overrides config)");
  sub->add_option("--seed", args->seed, "override base_seed from the config")
      ->each([args](const std::string&) { args->seed_set = true; });
  sub->add_option("--threads", args->threads, "worker threads (default: all)");
  sub->add_flag("--keep-journal", args->keep_journal,
                "keep the resume journal after a successful run");
}

int dispatch(const std::string& name, const CommonArgs& args) {
  scadamp::Config cfg = scadamp::Config::from_file(args.config_path);
  if (args.seed_set) cfg.set("base_seed", std::to_string(args.seed));
  std::string out = args.out.empty() ? cfg.get_string("out", "") : args.out;
  if (out.empty())
    throw scadamp::UsageError(
        "no output path: pass --out or set `out` in the config");
  scadamp::RunnerIo io;
  io.out = out;
  io.threads = args.threads > 0 ? args.threads : scadamp::default_threads();
  io.keep_journal = args.keep_journal;
  io.log = &std::cerr;
  if (name == "amp-sweep")
    scadamp::run_amp_sweep(std::move(cfg), io);
  else if (name == "de-fixed-point")
    scadamp::run_de_fixed_point(std::move(cfg), io);
  else if (name == "rs-sweep")
    scadamp::run_rs_sweep(std::move(cfg), io);
  else if (name == "phase-diagram")
    scadamp::run_phase_diagram(std::move(cfg), io);
  else if (name == "rate-distortion")
    scadamp::run_rate_distortion(std::move(cfg), io);
  else if (name == "cd-compare")
    scadamp::run_cd_compare(std::move(cfg), io);
  else
    throw scadamp::UsageError("unknown subcommand " + name);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(scadamp::kToolName) + " " + scadamp::kVersion +
               ": solver and phase-diagram toolkit for nonconvex penalized "
               "regression"};
  app.require_subcommand(1);

  const char* names[] = {"amp-sweep",     "de-fixed-point", "rs-sweep",
                         "phase-diagram", "rate-distortion", "cd-compare"};
  const char* descs[] = {
      "run the message-passing solver over a lambda grid and many seeds",
      "macroscopic state-evolution fixed points on a (lambda, a) grid",
      "replica saddle points with stability and free energy",
      "critical a(lambda, alpha) phase boundary by bisection",
      "sparsity/error trade-off curves at fixed a",
      "coordinate-descent uniqueness thresholds vs theory"};
  CommonArgs args[6];
  for (int i = 0; i < 6; ++i) add_common(app.add_subcommand(names[i], descs[i]), &args[i]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    for (int i = 0; i < 6; ++i)
      if (app.get_subcommand(names[i])->parsed()) return dispatch(names[i], args[i]);
    std::cerr << "error: no subcommand given\n";
    return 2;
  } catch (const scadamp::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  }
}
