#include "rsskv/types.h"

#include <stdexcept>

namespace rsskv {

std::string Timestamp::ToString() const {
  return std::to_string(micros) + "." + std::to_string(logical);
}

const char* ModeName(ConsistencyMode mode) {
  return mode == ConsistencyMode::kRss ? "spanner-rss" : "spanner-ss";
}

ConsistencyMode ParseMode(const std::string& name) {
  if (name == "rss" || name == "spanner-rss") return ConsistencyMode::kRss;
  if (name == "ss" || name == "spanner-ss" || name == "spanner") {
    return ConsistencyMode::kStrictSerializable;
  }
  throw std::invalid_argument("unknown mode: " + name);
}

}  // namespace rsskv
