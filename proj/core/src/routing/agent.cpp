#include "vanet/routing/agent.hpp"

#include "vanet/routing/aodv.hpp"
#include "vanet/routing/dsr.hpp"
#include "vanet/routing/fsr.hpp"

namespace vanet::routing {

std::string to_string(DropCause cause) {
  switch (cause) {
    case DropCause::NoRoute: return "no_route";
    case DropCause::BufferOverflow: return "buffer_overflow";
    case DropCause::BufferTimeout: return "buffer_timeout";
    case DropCause::DiscoveryFailed: return "discovery_failed";
    case DropCause::LinkBreak: return "link_break";
    case DropCause::TtlExpired: return "ttl_expired";
    case DropCause::Loop: return "loop";
  }
  return "unknown";
}

std::unique_ptr<RoutingAgent> make_agent(NodeId self, const ProtocolParams& params) {
  params.validate();
  switch (params.protocol) {
    case Protocol::Aodv: return std::make_unique<AodvAgent>(self, params.aodv);
    case Protocol::Dsr: return std::make_unique<DsrAgent>(self, params.dsr);
    case Protocol::Fsr: return std::make_unique<FsrAgent>(self, params.fsr);
  }
  return nullptr;
}

}  // namespace vanet::routing
