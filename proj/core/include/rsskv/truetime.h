#ifndef RSSKV_TRUETIME_H_
#define RSSKV_TRUETIME_H_

#include "rsskv/timestamp.h"

namespace rsskv {

struct TrueTimeInterval {
  Micros earliest = 0;
  Micros latest = 0;
};

struct TrueTimeConfig {
  Micros epsilon = 10 * kMillis;
};

// Emulated TrueTime over the simulator clock. Every node shares the same
// uncertainty bound; the true (simulated) instant is always inside Now().
class TrueTime {
 public:
  explicit TrueTime(TrueTimeConfig config);

  Micros epsilon() const { return config_.epsilon; }

  // [sim_time - epsilon, sim_time + epsilon], earliest clamped at 0.
  TrueTimeInterval Now(Micros sim_time) const;

  // First sim instant >= `now` at which Now().earliest > t.
  Micros EarliestAfter(Timestamp t, Micros now) const;

  // Commit wait: first sim instant >= `now` at which t_c is definitely past.
  Micros CommitWaitRelease(Timestamp t_c, Micros now) const {
    return EarliestAfter(t_c, now);
  }

 private:
  TrueTimeConfig config_;
};

}  // namespace rsskv

#endif  // RSSKV_TRUETIME_H_
