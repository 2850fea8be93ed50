#pragma once

#include <atomic>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qtur/matrix_core.hpp"

namespace qtur {

// Shortest exact decimal for a double ("%.17g"; inf/nan spelled out).
// Reports must round-trip and diff cleanly.
std::string format_double(double v);

nlohmann::json complex_matrix_to_json(const ComplexMatrix& m);

// A columnar report with config echo, summary block, and violation blobs.
// CSV layout: `# qtur-report v1`, one `# key=value` line per config entry,
// a header row, then data rows. JSON mirrors the same content.
struct ReportTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<std::string, std::string>> config;
  nlohmann::json summary = nlohmann::json::object();
  std::vector<nlohmann::json> violations;

  void add_config(const std::string& key, const std::string& value);
  void add_row(std::vector<std::string> row);

  std::string to_csv() const;
  nlohmann::json to_json() const;

  // format is "csv" or "json"; path "-" writes to stdout. When violations
  // exist and path is a file, a self-contained <path>.repro.json sidecar is
  // written as well.
  void write(const std::string& path, const std::string& format) const;
};

// Worker count for a campaign: QTUR_THREADS when set (>= 1), otherwise the
// hardware concurrency, never more than n_tasks.
int worker_count(int n_tasks);

// Evaluates fn(0..n-1) on a worker pool; the result vector is in index order
// regardless of scheduling, so reports stay deterministic. The first worker
// exception is rethrown after the pool drains.
template <typename Fn>
auto parallel_map(int n, Fn fn) -> std::vector<decltype(fn(0))> {
  using T = decltype(fn(0));
  const int workers = worker_count(n);
  std::vector<T> out;
  out.reserve(static_cast<std::size_t>(n));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) out.push_back(fn(i));
    return out;
  }
  std::vector<std::optional<T>> slots(static_cast<std::size_t>(n));
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto work = [&] {
    while (true) {
      const int i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      try {
        slots[static_cast<std::size_t>(i)].emplace(fn(i));
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
  for (auto& slot : slots) out.push_back(std::move(*slot));
  return out;
}

}  // namespace qtur
