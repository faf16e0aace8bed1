#ifndef RSSKV_LIBRSS_H_
#define RSSKV_LIBRSS_H_

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "rsskv/timestamp.h"

namespace rsskv {

// Causality metadata a process carries and attaches to the messages it
// sends: its minimum read timestamp at the last service it used, and that
// service's name.
struct CausalContext {
  Timestamp t_min;
  std::optional<std::string> last_service;

  // "<t_min in whole microseconds, rounded up>:<service>". The service part
  // is empty when there is none.
  std::string Encode() const;
  static CausalContext Decode(const std::string& wire);
};

// Merges a received context into the receiver's. t_min takes the maximum;
// the sender's last service is adopted only if the sender's t_min is
// strictly larger.
void MergeContext(CausalContext& receiver, const CausalContext& sender);

class RegistryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Per-process registry of services that provide a real-time fence. Starting
// a transaction at a service other than the previous one first runs the
// previous service's fence.
class ServiceRegistry {
 public:
  // A fence is asynchronous; it calls `done` once it has completed.
  using FenceFn = std::function<void(std::function<void()> done)>;

  void RegisterService(const std::string& name, FenceFn fence);
  void UnregisterService(const std::string& name);
  bool Contains(const std::string& name) const { return services_.contains(name); }

  // Runs the fence of ctx.last_service if it differs from `name`, then sets
  // ctx.last_service = name and calls `proceed(fenced)`.
  void StartTransaction(CausalContext& ctx, const std::string& name,
                        std::function<void(bool fenced)> proceed);

  std::size_t fences_run() const { return fences_run_; }

 private:
  std::map<std::string, FenceFn> services_;
  std::size_t fences_run_ = 0;
};

}  // namespace rsskv

#endif  // RSSKV_LIBRSS_H_
