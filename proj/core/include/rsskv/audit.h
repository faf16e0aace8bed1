#ifndef RSSKV_AUDIT_H_
#define RSSKV_AUDIT_H_

#include <string>
#include <vector>

#include "rsskv/deployment.h"

namespace rsskv {

struct AuditReport {
  std::size_t rw_checked = 0;
  std::size_t ro_checked = 0;
  std::size_t keys_checked = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Post-run timestamp checks against the shards' committed versions:
//  - every committed read-write transaction has invoke < t_c < respond;
//  - conflicting committed read-write transactions have distinct t_c;
//  - every read-only transaction has t_snap <= t_read and returned, per key,
//    the version with the greatest t_c <= t_snap.
AuditReport RunAudits(Deployment& deployment);

}  // namespace rsskv

#endif  // RSSKV_AUDIT_H_
