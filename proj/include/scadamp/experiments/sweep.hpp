#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace scadamp {

// Resumable grid sweep.  Each task owns one grid point and produces the CSV
// body rows for it.  Completed tasks are appended to `<out>.journal` with a
// trailing DONE marker; a rerun restores every journaled task whose marker
// and row count are intact and computes only the rest.  The final artifact
// is assembled in task (canonical) order, written to `<out>.tmp` and renamed
// into place, so thread count and interruption history never change the
// output bytes.

struct SweepTask {
  std::string key;  // unique, no whitespace
  std::function<std::vector<std::string>()> compute;
};

struct SweepStats {
  std::size_t computed = 0;
  std::size_t restored = 0;
};

SweepStats run_sweep(const std::string& out_path,
                     const std::vector<std::string>& header_comments,
                     const std::string& column_header,
                     const std::vector<SweepTask>& tasks, int threads,
                     std::uint64_t fingerprint, bool keep_journal,
                     std::ostream* log);

// FNV-1a, used to tie a journal to the config that produced it.
std::uint64_t fingerprint64(const std::string& text);

}  // namespace scadamp
