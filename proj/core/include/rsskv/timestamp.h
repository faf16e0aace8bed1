#ifndef RSSKV_TIMESTAMP_H_
#define RSSKV_TIMESTAMP_H_

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>

namespace rsskv {

// Simulated time and durations, in microseconds.
using Micros = std::int64_t;

constexpr Micros kMillis = 1000;
constexpr Micros kSeconds = 1000 * kMillis;

constexpr Micros MillisToMicros(double ms) {
  return static_cast<Micros>(ms * 1000.0 + (ms >= 0 ? 0.5 : -0.5));
}
constexpr double MicrosToMillis(Micros us) { return static_cast<double>(us) / 1000.0; }

// Totally ordered logical-physical timestamp. `micros` is physical time;
// `logical` breaks ties so that "strictly greater than" is always available
// without waiting for the physical clock to tick.
struct Timestamp {
  Micros micros = 0;
  std::uint64_t logical = 0;

  static constexpr Timestamp At(Micros us) { return Timestamp{us, 0}; }
  static constexpr Timestamp Zero() { return Timestamp{0, 0}; }
  static constexpr Timestamp Max() {
    return Timestamp{std::numeric_limits<Micros>::max(),
                     std::numeric_limits<std::uint64_t>::max()};
  }

  // Smallest timestamp strictly greater than this one.
  constexpr Timestamp Successor() const { return Timestamp{micros, logical + 1}; }

  // Shifts the physical component; the logical component is kept.
  constexpr Timestamp Plus(Micros d) const { return Timestamp{micros + d, logical}; }

  friend constexpr auto operator<=>(const Timestamp&, const Timestamp&) = default;

  std::string ToString() const;
};

// The smallest timestamp that is > `floor` and >= the physical time `physical`.
constexpr Timestamp StrictlyAbove(Timestamp floor, Micros physical) {
  Timestamp candidate = Timestamp::At(physical);
  return candidate > floor ? candidate : floor.Successor();
}

// Rounds up to whole microseconds; never below `ts`.
constexpr Micros CeilMicros(Timestamp ts) {
  return ts.logical == 0 ? ts.micros : ts.micros + 1;
}

inline std::ostream& operator<<(std::ostream& os, const Timestamp& ts) {
  return os << ts.ToString();
}

}  // namespace rsskv

#endif  // RSSKV_TIMESTAMP_H_
