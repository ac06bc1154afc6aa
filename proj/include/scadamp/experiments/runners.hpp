#pragma once

#include <ostream>
#include <string>

#include "scadamp/experiments/config.hpp"

namespace scadamp {

struct RunnerIo {
  std::string out;
  int threads = 1;
  bool keep_journal = false;
  std::ostream* log = nullptr;  // progress notes (stderr); never the CSV
};

// Each runner validates its config keys strictly, sweeps its grid with
// per-grid-point resumability, and writes one CSV (schema in
// docs/csv_schema.md).  Per-point numerical failures are flagged in rows;
// only a sweep with zero successful points throws NumericalError.
void run_amp_sweep(Config cfg, const RunnerIo& io);
void run_de_fixed_point(Config cfg, const RunnerIo& io);
void run_rs_sweep(Config cfg, const RunnerIo& io);
void run_phase_diagram(Config cfg, const RunnerIo& io);
void run_rate_distortion(Config cfg, const RunnerIo& io);
void run_cd_compare(Config cfg, const RunnerIo& io);

}  // namespace scadamp
