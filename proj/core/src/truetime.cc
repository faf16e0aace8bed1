#include "rsskv/truetime.h"

#include <algorithm>
#include <stdexcept>

namespace rsskv {

TrueTime::TrueTime(TrueTimeConfig config) : config_(config) {
  if (config_.epsilon < 0) {
    throw std::invalid_argument("TrueTime epsilon must be non-negative");
  }
}

TrueTimeInterval TrueTime::Now(Micros sim_time) const {
  return TrueTimeInterval{std::max<Micros>(0, sim_time - config_.epsilon),
                          sim_time + config_.epsilon};
}

Micros TrueTime::EarliestAfter(Timestamp t, Micros now) const {
  // Now().earliest is a whole-microsecond timestamp {e, 0}; it exceeds t iff
  // e > t.micros, whatever t's logical part. With t.micros >= 0 the clamp at
  // zero never satisfies the predicate, so solve sim - epsilon > t.micros.
  const Micros release = t.micros + config_.epsilon + 1;
  return std::max(now, release);
}

}  // namespace rsskv
