#include "rsskv/librss.h"

#include <charconv>

namespace rsskv {

std::string CausalContext::Encode() const {
  return std::to_string(CeilMicros(t_min)) + ":" + last_service.value_or("");
}

CausalContext CausalContext::Decode(const std::string& wire) {
  const auto colon = wire.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("context without ':'");
  Micros us = 0;
  const char* first = wire.data();
  const char* last = wire.data() + colon;
  auto [ptr, ec] = std::from_chars(first, last, us);
  if (ec != std::errc() || ptr != last || us < 0) {
    throw std::invalid_argument("bad t_min in context '" + wire + "'");
  }
  CausalContext ctx;
  ctx.t_min = Timestamp::At(us);
  if (colon + 1 < wire.size()) ctx.last_service = wire.substr(colon + 1);
  return ctx;
}

void MergeContext(CausalContext& receiver, const CausalContext& sender) {
  if (sender.t_min > receiver.t_min) {
    receiver.t_min = sender.t_min;
    if (sender.last_service) receiver.last_service = sender.last_service;
  }
}

void ServiceRegistry::RegisterService(const std::string& name, FenceFn fence) {
  if (name.empty() || name.find(':') != std::string::npos) {
    throw RegistryError("invalid service name '" + name + "'");
  }
  if (!services_.emplace(name, std::move(fence)).second) {
    throw RegistryError("service '" + name + "' already registered");
  }
}

void ServiceRegistry::UnregisterService(const std::string& name) {
  if (services_.erase(name) == 0) throw RegistryError("service '" + name + "' not registered");
}

void ServiceRegistry::StartTransaction(CausalContext& ctx, const std::string& name,
                                       std::function<void(bool fenced)> proceed) {
  if (!services_.contains(name)) throw RegistryError("service '" + name + "' not registered");
  if (!ctx.last_service || *ctx.last_service == name) {
    ctx.last_service = name;
    proceed(false);
    return;
  }
  auto it = services_.find(*ctx.last_service);
  if (it == services_.end()) {
    throw RegistryError("previous service '" + *ctx.last_service + "' not registered");
  }
  ++fences_run_;
  ctx.last_service = name;
  it->second([proceed = std::move(proceed)]() { proceed(true); });
}

}  // namespace rsskv
