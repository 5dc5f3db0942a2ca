#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "prdt/kv/wire.hpp"

namespace prdt::bench {

enum class WorkloadKind { read_only, write_only, mixed };

std::string to_string(WorkloadKind k);       // READ_ONLY, WRITE_ONLY, MIXED_50_50
WorkloadKind parse_workload(const std::string& text);  // read|write|mixed or the names above

struct Workload {
  WorkloadKind kind = WorkloadKind::write_only;
  std::size_t ops = 1000;
  std::size_t key_space = 100;
  std::uint64_t seed = 1;
};

// Deterministic per seed. Keys are uniform over the key space; a mixed
// workload has exactly half reads (rounded down).
std::vector<kv::ClientRequest> generate(const Workload& w);

struct BenchRecord {
  std::uint64_t op_index = 0;
  std::string kind;  // PUT or GET
  std::uint64_t latency_us = 0;
  std::uint64_t timestamp_us = 0;  // completion time since the run started
  friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

struct RunResult {
  std::vector<BenchRecord> records;
  std::optional<std::string> incomplete;  // why the run stopped early
};

using Send = std::function<kv::ClientResponse(const kv::ClientRequest&)>;

// Issues the requests strictly one after another. An ERROR response or an
// exception stops the run; the records so far are kept.
RunResult run_workload(const std::vector<kv::ClientRequest>& requests, const Send& send);

struct Summary {
  std::size_t records = 0;  // before warmup
  std::size_t used = 0;     // after warmup
  double mean_ops_per_s = 0;
  double median_ops_per_s = 0;
  std::uint64_t p50_us = 0;
  std::uint64_t p90_us = 0;
  std::uint64_t p99_us = 0;
  std::uint64_t max_us = 0;
  friend bool operator==(const Summary&, const Summary&) = default;
};

// Nearest-rank percentile of an unsorted sample; p in (0, 100].
std::uint64_t percentile(std::vector<std::uint64_t> sample, double p);

// Drops the leading warmup fraction of every run, then pools the rest.
// Throws std::invalid_argument if nothing is left.
Summary summarize(const std::vector<std::vector<BenchRecord>>& runs, double warmup_fraction = 0.1);
Summary summarize(const std::vector<BenchRecord>& records, double warmup_fraction = 0.1);

// Repeated runs share one CSV; each run restarts at opIndex 0.
std::vector<std::vector<BenchRecord>> split_runs(const std::vector<BenchRecord>& records);

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records, const std::optional<std::string>& incomplete = std::nullopt);
RunResult read_csv(std::istream& in);  // throws std::invalid_argument

std::string format_summary(const Summary& s);
Summary parse_summary(const std::string& line);  // throws std::invalid_argument

}  // namespace prdt::bench
