#include "rsskv/audit.h"

#include <algorithm>
#include <map>
#include <tuple>

namespace rsskv {

namespace {

constexpr std::size_t kMaxReported = 20;

void Report(AuditReport& report, std::string msg) {
  if (report.violations.size() < kMaxReported) report.violations.push_back(std::move(msg));
}

}  // namespace

AuditReport RunAudits(Deployment& deployment) {
  AuditReport report;
  std::map<std::string, std::map<Key, std::vector<Version>>> committed;
  for (std::size_t i = 0; i < deployment.service_count(); ++i) {
    KvService& svc = deployment.service(i);
    auto& by_key = committed[svc.name()];
    for (ShardId s = 0; s < svc.shard_count(); ++s) {
      for (const auto& v : svc.shard(s).store().AllVersions()) by_key[v.key].push_back(v);
    }
    for (auto& [key, list] : by_key) {
      std::sort(list.begin(), list.end(),
                [](const Version& a, const Version& b) { return a.t_c < b.t_c; });
      for (std::size_t j = 1; j < list.size(); ++j) {
        if (list[j].t_c == list[j - 1].t_c) {
          Report(report, "key " + std::to_string(key) + " has two versions at " +
                             list[j].t_c.ToString());
        }
      }
    }
    report.keys_checked += by_key.size();
  }

  // (service, key) -> (t_c, txn, writes?) for every committed access.
  std::map<std::pair<std::string, Key>, std::vector<std::tuple<Timestamp, TxnId, bool>>> access;
  for (const auto& rw : deployment.audit().rw) {
    ++report.rw_checked;
    if (!(Timestamp::At(rw.invoke) < rw.t_c && rw.t_c < Timestamp::At(rw.respond))) {
      Report(report, "txn " + std::to_string(rw.txn) + ": t_c " + rw.t_c.ToString() +
                         " not inside (" + std::to_string(rw.invoke) + ", " +
                         std::to_string(rw.respond) + ")");
    }
    for (Key k : rw.reads) access[{rw.service, k}].emplace_back(rw.t_c, rw.txn, false);
    for (Key k : rw.writes) access[{rw.service, k}].emplace_back(rw.t_c, rw.txn, true);
  }
  for (auto& [key, list] : access) {
    std::sort(list.begin(), list.end());
    for (std::size_t i = 0; i < list.size(); ++i) {
      for (std::size_t j = i + 1; j < list.size() && std::get<0>(list[j]) == std::get<0>(list[i]);
           ++j) {
        if (std::get<1>(list[i]) != std::get<1>(list[j]) &&
            (std::get<2>(list[i]) || std::get<2>(list[j]))) {
          Report(report, "conflicting txns " + std::to_string(std::get<1>(list[i])) + " and " +
                             std::to_string(std::get<1>(list[j])) + " share t_c " +
                             std::get<0>(list[i]).ToString());
        }
      }
    }
  }

  for (const auto& ro : deployment.audit().ro) {
    ++report.ro_checked;
    if (ro.t_snap > ro.t_read) {
      Report(report, "ro " + std::to_string(ro.txn) + ": t_snap " + ro.t_snap.ToString() +
                         " > t_read " + ro.t_read.ToString());
    }
    const auto& by_key = committed[ro.service];
    for (const auto& [key, got] : ro.values) {
      Version expected{Timestamp::Zero(), key, Value{}};
      if (auto it = by_key.find(key); it != by_key.end()) {
        for (const auto& v : it->second) {
          if (v.t_c <= ro.t_snap) expected = v;
        }
      }
      if (!(expected.value == got.value) || expected.t_c != got.t_c) {
        Report(report, "ro " + std::to_string(ro.txn) + " key " + std::to_string(key) +
                           ": returned writer " + std::to_string(got.value.writer) + " at " +
                           got.t_c.ToString() + ", expected writer " +
                           std::to_string(expected.value.writer) + " at " +
                           expected.t_c.ToString());
      }
    }
  }
  return report;
}

}  // namespace rsskv
