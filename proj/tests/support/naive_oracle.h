#ifndef RSSKV_TESTS_SUPPORT_NAIVE_ORACLE_H_
#define RSSKV_TESTS_SUPPORT_NAIVE_ORACLE_H_

#include <cstdint>
#include <vector>

#include "rsskv/checker.h"
#include "rsskv/history.h"
#include "rsskv/simulator.h"

namespace rsskv::testing {

// Reference decision procedure: builds the relations straight from the
// event list and tries every permutation of the units, cutting a branch
// only when its prefix already breaks an order constraint or a read.
// Meant for tiny histories only.
bool NaiveAccepts(const std::vector<HistoryEvent>& events, Model model);

struct RandomHistoryOptions {
  int max_txns = 8;
  int processes = 3;
  int keys = 3;
  double incomplete_prob = 0.1;
  double abort_prob = 0.05;
  double fence_prob = 0.05;
  double message_prob = 0.15;
};

// A well-formed random history. Reads pick their writer among the
// transactions that write the key (or the initial value), so many
// histories are inconsistent under some model.
std::vector<HistoryEvent> RandomHistory(RandomStream& rng, const RandomHistoryOptions& options);

}  // namespace rsskv::testing

#endif  // RSSKV_TESTS_SUPPORT_NAIVE_ORACLE_H_
