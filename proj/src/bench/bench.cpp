#include "prdt/bench/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace prdt::bench {

std::string to_string(WorkloadKind k) {
  switch (k) {
    case WorkloadKind::read_only: return "READ_ONLY";
    case WorkloadKind::write_only: return "WRITE_ONLY";
    case WorkloadKind::mixed: return "MIXED_50_50";
  }
  return "?";
}

WorkloadKind parse_workload(const std::string& text) {
  if (text == "read" || text == "READ_ONLY") return WorkloadKind::read_only;
  if (text == "write" || text == "WRITE_ONLY") return WorkloadKind::write_only;
  if (text == "mixed" || text == "MIXED_50_50") return WorkloadKind::mixed;
  throw std::invalid_argument("unknown workload: " + text);
}

std::vector<kv::ClientRequest> generate(const Workload& w) {
  if (w.key_space == 0) throw std::invalid_argument("key space must be positive");
  std::mt19937_64 rng(w.seed);
  std::vector<bool> is_read(w.ops, w.kind == WorkloadKind::read_only);
  if (w.kind == WorkloadKind::mixed) {
    std::fill(is_read.begin(), is_read.begin() + static_cast<long>(w.ops / 2), true);
    std::shuffle(is_read.begin(), is_read.end(), rng);
  }
  std::uniform_int_distribution<std::size_t> key(0, w.key_space - 1);
  std::vector<kv::ClientRequest> out;
  out.reserve(w.ops);
  for (std::size_t i = 0; i < w.ops; ++i) {
    auto k = "key" + std::to_string(key(rng));
    out.push_back(is_read[i] ? kv::ClientRequest::get(std::move(k)) : kv::ClientRequest::put(std::move(k), "v" + std::to_string(i)));
  }
  return out;
}

RunResult run_workload(const std::vector<kv::ClientRequest>& requests, const Send& send) {
  using clock = std::chrono::steady_clock;
  RunResult result;
  result.records.reserve(requests.size());
  const auto origin = clock::now();
  auto micros = [](clock::duration d) { return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::microseconds>(d).count()); };
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const auto start = clock::now();
    kv::ClientResponse response;
    try {
      response = send(requests[i]);
    } catch (const std::exception& e) {
      result.incomplete = "op " + std::to_string(i) + ": " + e.what();
      break;
    }
    const auto end = clock::now();
    if (response.status == "ERROR") {
      result.incomplete = "op " + std::to_string(i) + ": " + response.value.value_or("error");
      break;
    }
    result.records.push_back({i, requests[i].op, micros(end - start), micros(end - origin)});
  }
  return result;
}

std::uint64_t percentile(std::vector<std::uint64_t> sample, double p) {
  if (sample.empty()) throw std::invalid_argument("percentile of an empty sample");
  if (!(p > 0 && p <= 100)) throw std::invalid_argument("percentile out of range");
  std::sort(sample.begin(), sample.end());
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(sample.size())));
  return sample[std::clamp<std::size_t>(rank, 1, sample.size()) - 1];
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

}  // namespace

Summary summarize(const std::vector<std::vector<BenchRecord>>& runs, double warmup_fraction) {
  if (!(warmup_fraction >= 0 && warmup_fraction < 1)) throw std::invalid_argument("warmup fraction must be in [0, 1)");
  Summary s;
  std::vector<std::uint64_t> latencies;
  for (const auto& run : runs) {
    s.records += run.size();
    const auto skip = static_cast<std::size_t>(std::floor(warmup_fraction * static_cast<double>(run.size())));
    for (std::size_t i = skip; i < run.size(); ++i) latencies.push_back(run[i].latency_us);
  }
  if (latencies.empty()) throw std::invalid_argument("no records to summarize");
  s.used = latencies.size();
  // A zero latency would mean infinite throughput; count it as 1 us.
  std::vector<double> rates;
  rates.reserve(latencies.size());
  for (auto l : latencies) rates.push_back(1e6 / static_cast<double>(std::max<std::uint64_t>(l, 1)));
  const auto total_us = std::accumulate(latencies.begin(), latencies.end(), std::uint64_t{0});
  s.mean_ops_per_s = static_cast<double>(s.used) * 1e6 / static_cast<double>(std::max<std::uint64_t>(total_us, 1));
  s.median_ops_per_s = median(std::move(rates));
  s.p50_us = percentile(latencies, 50);
  s.p90_us = percentile(latencies, 90);
  s.p99_us = percentile(latencies, 99);
  s.max_us = *std::max_element(latencies.begin(), latencies.end());
  return s;
}

Summary summarize(const std::vector<BenchRecord>& records, double warmup_fraction) {
  return summarize(std::vector<std::vector<BenchRecord>>{records}, warmup_fraction);
}

std::vector<std::vector<BenchRecord>> split_runs(const std::vector<BenchRecord>& records) {
  std::vector<std::vector<BenchRecord>> runs;
  for (const auto& r : records) {
    if (runs.empty() || r.op_index == 0) runs.emplace_back();
    runs.back().push_back(r);
  }
  return runs;
}

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records, const std::optional<std::string>& incomplete) {
  out << "opIndex,kind,latency_us,timestamp\n";
  for (const auto& r : records) out << r.op_index << ',' << r.kind << ',' << r.latency_us << ',' << r.timestamp_us << '\n';
  if (incomplete) out << "# incomplete: " << *incomplete << '\n';
}

namespace {

std::uint64_t to_u64(const std::string& field, const std::string& line) {
  std::uint64_t v = 0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc{} || ptr != end || field.empty()) throw std::invalid_argument("bad number in csv line: " + line);
  return v;
}

double to_double(const std::string& field) {
  double v = 0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc{} || ptr != end || field.empty()) throw std::invalid_argument("bad number in summary: " + field);
  return v;
}

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

RunResult read_csv(std::istream& in) {
  RunResult result;
  std::string line;
  if (!std::getline(in, line) || line != "opIndex,kind,latency_us,timestamp") throw std::invalid_argument("missing csv header");
  const std::string marker = "# incomplete: ";
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind(marker, 0) == 0) {
      result.incomplete = line.substr(marker.size());
      continue;
    }
    if (result.incomplete) throw std::invalid_argument("records after the incomplete marker");
    std::vector<std::string> fields;
    std::stringstream row(line);
    std::string f;
    while (std::getline(row, f, ',')) fields.push_back(f);
    if (fields.size() != 4) throw std::invalid_argument("expected 4 fields: " + line);
    if (fields[1] != "PUT" && fields[1] != "GET") throw std::invalid_argument("bad op kind: " + line);
    result.records.push_back({to_u64(fields[0], line), fields[1], to_u64(fields[2], line), to_u64(fields[3], line)});
  }
  return result;
}

std::string format_summary(const Summary& s) {
  std::ostringstream out;
  out << "records=" << s.records << " used=" << s.used << " mean_ops_per_s=" << shortest(s.mean_ops_per_s)
      << " median_ops_per_s=" << shortest(s.median_ops_per_s) << " p50_us=" << s.p50_us << " p90_us=" << s.p90_us
      << " p99_us=" << s.p99_us << " max_us=" << s.max_us;
  return out.str();
}

Summary parse_summary(const std::string& line) {
  std::map<std::string, std::string> fields;
  std::stringstream in(line);
  std::string item;
  while (in >> item) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("bad summary field: " + item);
    fields[item.substr(0, eq)] = item.substr(eq + 1);
  }
  auto need = [&](const char* key) -> const std::string& {
    auto it = fields.find(key);
    if (it == fields.end()) throw std::invalid_argument(std::string("summary lacks ") + key);
    return it->second;
  };
  Summary s;
  s.records = to_u64(need("records"), line);
  s.used = to_u64(need("used"), line);
  s.mean_ops_per_s = to_double(need("mean_ops_per_s"));
  s.median_ops_per_s = to_double(need("median_ops_per_s"));
  s.p50_us = to_u64(need("p50_us"), line);
  s.p90_us = to_u64(need("p90_us"), line);
  s.p99_us = to_u64(need("p99_us"), line);
  s.max_us = to_u64(need("max_us"), line);
  return s;
}

}  // namespace prdt::bench
