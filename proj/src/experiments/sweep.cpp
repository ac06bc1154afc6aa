#include "scadamp/experiments/sweep.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "scadamp/parallel.hpp"

namespace scadamp {

std::uint64_t fingerprint64(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

// Journal grammar, one record per line:
//   FP <hex>           first line; config fingerprint
//   ROW <key> <csv>    one body row of task <key>
//   DONE <key> <n>     task <key> completed with n rows
std::map<std::string, std::vector<std::string>> load_journal(
    const std::string& path, std::uint64_t fingerprint) {
  std::map<std::string, std::vector<std::string>> done;
  std::ifstream in(path);
  if (!in) return done;
  std::map<std::string, std::vector<std::string>> pending;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      first = false;
      std::ostringstream want;
      want << "FP " << std::hex << fingerprint;
      if (line != want.str()) return done;  // stale journal: ignore
      continue;
    }
    if (line.rfind("ROW ", 0) == 0) {
      std::size_t sp = line.find(' ', 4);
      if (sp == std::string::npos) continue;
      pending[line.substr(4, sp - 4)].push_back(line.substr(sp + 1));
    } else if (line.rfind("DONE ", 0) == 0) {
      std::istringstream ss(line.substr(5));
      std::string key;
      std::size_t n = 0;
      if (!(ss >> key >> n)) continue;
      auto it = pending.find(key);
      if (it != pending.end() && it->second.size() == n)
        done[key] = std::move(it->second);
      pending.erase(key);
    }
  }
  return done;
}

}  // namespace

SweepStats run_sweep(const std::string& out_path,
                     const std::vector<std::string>& header_comments,
                     const std::string& column_header,
                     const std::vector<SweepTask>& tasks, int threads,
                     std::uint64_t fingerprint, bool keep_journal,
                     std::ostream* log) {
  std::string journal_path = out_path + ".journal";
  auto restored = load_journal(journal_path, fingerprint);

  std::vector<std::vector<std::string>> rows(tasks.size());
  std::vector<std::size_t> todo;
  SweepStats stats;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    auto it = restored.find(tasks[i].key);
    if (it != restored.end()) {
      rows[i] = it->second;
      ++stats.restored;
    } else {
      todo.push_back(i);
    }
  }
  if (log && stats.restored > 0)
    *log << "resumed " << stats.restored << " grid point(s) from "
         << journal_path << "\n";

  std::ofstream journal;
  std::mutex journal_mu;
  if (!todo.empty()) {
    bool fresh = restored.empty();
    journal.open(journal_path, fresh ? std::ios::trunc : std::ios::app);
    if (!journal)
      throw std::runtime_error("cannot open journal " + journal_path);
    if (fresh) {
      journal << "FP " << std::hex << fingerprint << std::dec << "\n";
      journal.flush();
    }
  }

  parallel_for(todo.size(), threads, [&](std::size_t k) {
    std::size_t i = todo[k];
    std::vector<std::string> out = tasks[i].compute();
    {
      std::lock_guard<std::mutex> lock(journal_mu);
      for (const auto& row : out)
        journal << "ROW " << tasks[i].key << " " << row << "\n";
      journal << "DONE " << tasks[i].key << " " << out.size() << "\n";
      journal.flush();
    }
    rows[i] = std::move(out);
  });
  stats.computed = todo.size();
  if (journal.is_open()) journal.close();

  std::string tmp_path = out_path + ".tmp";
  {
    std::ofstream out(tmp_path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output " + tmp_path);
    for (const auto& line : header_comments) out << line << "\n";
    out << column_header << "\n";
    for (const auto& task_rows : rows)
      for (const auto& row : task_rows) out << row << "\n";
    if (!out) throw std::runtime_error("short write to " + tmp_path);
  }
  if (std::rename(tmp_path.c_str(), out_path.c_str()) != 0)
    throw std::runtime_error("cannot rename " + tmp_path + " to " + out_path);
  if (!keep_journal) std::remove(journal_path.c_str());
  return stats;
}

}  // namespace scadamp
