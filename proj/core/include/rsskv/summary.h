#ifndef RSSKV_SUMMARY_H_
#define RSSKV_SUMMARY_H_

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rsskv/timestamp.h"

namespace rsskv {

// Nearest-rank percentile: the value at rank ceil(p/100 * n) of the sorted
// samples. `sorted` must be non-empty and ascending.
Micros NearestRank(const std::vector<Micros>& sorted, double p);

struct LatencyRow {
  std::string txn_type;
  std::size_t count = 0;
  double p50_ms = 0;
  double p90_ms = 0;
  double p99_ms = 0;
  double p999_ms = 0;
  double p9995_ms = 0;
  std::uint64_t aborts = 0;
};

// Empty sample sets have no row.
std::optional<LatencyRow> Summarize(const std::string& txn_type, std::vector<Micros> samples,
                                    std::uint64_t aborts);

struct LatencySummary {
  std::vector<LatencyRow> rows;
  std::map<std::string, std::uint64_t> messages;

  const LatencyRow* Find(const std::string& txn_type) const;
};

// txn_type,count,p50_ms,p90_ms,p99_ms,p999_ms,aborts
void WriteSummaryCsv(std::ostream& out, const LatencySummary& summary);
// message_type,count
void WriteMessageCsv(std::ostream& out, const LatencySummary& summary);

}  // namespace rsskv

#endif  // RSSKV_SUMMARY_H_
