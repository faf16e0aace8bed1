#ifndef RSSKV_LATENCY_MATRIX_H_
#define RSSKV_LATENCY_MATRIX_H_

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "rsskv/timestamp.h"

namespace rsskv {

using RegionId = std::uint32_t;

// Symmetric region-to-region round-trip times. The diagonal holds the
// intra-region RTT.
class LatencyMatrix {
 public:
  LatencyMatrix() = default;
  LatencyMatrix(std::vector<std::string> regions, std::vector<std::vector<Micros>> rtt);

  // CA/VA/IR with the measured minimum RTTs 62/136/68 ms and 0.2 ms
  // intra-region.
  static LatencyMatrix ThreeRegionDefault();

  // Plain-text table: a header row of region names followed by one row per
  // region of RTTs in milliseconds. Rows may optionally begin with the region
  // name. Lines starting with '#' are ignored.
  static LatencyMatrix Parse(std::istream& in);
  static LatencyMatrix LoadFile(const std::string& path);
  std::string Format() const;

  std::size_t size() const { return regions_.size(); }
  const std::vector<std::string>& regions() const { return regions_; }
  const std::string& name(RegionId r) const { return regions_.at(r); }
  RegionId Find(std::string_view name) const;

  Micros Rtt(RegionId a, RegionId b) const { return rtt_.at(a).at(b); }
  Micros OneWay(RegionId a, RegionId b) const { return Rtt(a, b) / 2; }

 private:
  void Validate() const;

  std::vector<std::string> regions_;
  std::vector<std::vector<Micros>> rtt_;
};

}  // namespace rsskv

#endif  // RSSKV_LATENCY_MATRIX_H_
