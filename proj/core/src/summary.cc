#include "rsskv/summary.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <stdexcept>

namespace rsskv {

Micros NearestRank(const std::vector<Micros>& sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("percentile of no samples");
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

std::optional<LatencyRow> Summarize(const std::string& txn_type, std::vector<Micros> samples,
                                    std::uint64_t aborts) {
  if (samples.empty()) return std::nullopt;
  std::sort(samples.begin(), samples.end());
  LatencyRow row;
  row.txn_type = txn_type;
  row.count = samples.size();
  row.p50_ms = MicrosToMillis(NearestRank(samples, 50));
  row.p90_ms = MicrosToMillis(NearestRank(samples, 90));
  row.p99_ms = MicrosToMillis(NearestRank(samples, 99));
  row.p999_ms = MicrosToMillis(NearestRank(samples, 99.9));
  row.p9995_ms = MicrosToMillis(NearestRank(samples, 99.95));
  row.aborts = aborts;
  return row;
}

const LatencyRow* LatencySummary::Find(const std::string& txn_type) const {
  for (const auto& r : rows) {
    if (r.txn_type == txn_type) return &r;
  }
  return nullptr;
}

void WriteSummaryCsv(std::ostream& out, const LatencySummary& summary) {
  out << "txn_type,count,p50_ms,p90_ms,p99_ms,p999_ms,aborts\n";
  out << std::fixed << std::setprecision(3);
  for (const auto& r : summary.rows) {
    out << r.txn_type << ',' << r.count << ',' << r.p50_ms << ',' << r.p90_ms << ','
        << r.p99_ms << ',' << r.p999_ms << ',' << r.aborts << '\n';
  }
}

void WriteMessageCsv(std::ostream& out, const LatencySummary& summary) {
  out << "message_type,count\n";
  for (const auto& [name, count] : summary.messages) out << name << ',' << count << '\n';
}

}  // namespace rsskv
