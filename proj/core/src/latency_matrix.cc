#include "rsskv/latency_matrix.h"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace rsskv {

LatencyMatrix::LatencyMatrix(std::vector<std::string> regions,
                             std::vector<std::vector<Micros>> rtt)
    : regions_(std::move(regions)), rtt_(std::move(rtt)) {
  Validate();
}

LatencyMatrix LatencyMatrix::ThreeRegionDefault() {
  const Micros intra = MillisToMicros(0.2);
  return LatencyMatrix({"CA", "VA", "IR"},
                       {{intra, MillisToMicros(62), MillisToMicros(136)},
                        {MillisToMicros(62), intra, MillisToMicros(68)},
                        {MillisToMicros(136), MillisToMicros(68), intra}});
}

void LatencyMatrix::Validate() const {
  if (regions_.empty()) throw std::invalid_argument("latency matrix has no regions");
  if (rtt_.size() != regions_.size()) {
    throw std::invalid_argument("latency matrix row count does not match regions");
  }
  for (std::size_t a = 0; a < rtt_.size(); ++a) {
    if (rtt_[a].size() != regions_.size()) {
      throw std::invalid_argument("latency matrix row " + regions_[a] + " has wrong width");
    }
    for (std::size_t b = 0; b < rtt_.size(); ++b) {
      if (rtt_[a][b] <= 0) {
        throw std::invalid_argument("latency matrix entries must be positive");
      }
      if (rtt_[a][b] != rtt_[b][a]) {
        throw std::invalid_argument("latency matrix is not symmetric at " + regions_[a] +
                                    "/" + regions_[b]);
      }
    }
  }
}

RegionId LatencyMatrix::Find(std::string_view name) const {
  for (RegionId r = 0; r < regions_.size(); ++r) {
    if (regions_[r] == name) return r;
  }
  throw std::invalid_argument("unknown region: " + std::string(name));
}

LatencyMatrix LatencyMatrix::Parse(std::istream& in) {
  std::vector<std::string> regions;
  std::vector<std::vector<Micros>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);
    if (regions.empty()) {
      regions = tokens;
      continue;
    }
    std::size_t start = 0;
    if (tokens.size() == regions.size() + 1) {
      if (tokens[0] != regions[rows.size()]) {
        throw std::invalid_argument("latency matrix row label " + tokens[0] +
                                    " out of order");
      }
      start = 1;
    }
    std::vector<Micros> row;
    for (std::size_t i = start; i < tokens.size(); ++i) {
      std::size_t used = 0;
      double ms = 0;
      try {
        ms = std::stod(tokens[i], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tokens[i].size()) {
        throw std::invalid_argument("bad latency entry: " + tokens[i]);
      }
      row.push_back(MillisToMicros(ms));
    }
    rows.push_back(std::move(row));
  }
  return LatencyMatrix(std::move(regions), std::move(rows));
}

LatencyMatrix LatencyMatrix::LoadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open latency matrix " + path);
  return Parse(in);
}

std::string LatencyMatrix::Format() const {
  std::ostringstream out;
  for (std::size_t r = 0; r < regions_.size(); ++r) {
    out << (r == 0 ? "" : " ") << regions_[r];
  }
  out << '\n';
  for (std::size_t a = 0; a < regions_.size(); ++a) {
    out << regions_[a];
    for (std::size_t b = 0; b < regions_.size(); ++b) {
      out << ' ' << MicrosToMillis(rtt_[a][b]);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace rsskv
