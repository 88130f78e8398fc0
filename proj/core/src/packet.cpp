#include "vanet/packet.hpp"

namespace vanet {
namespace {

constexpr std::uint32_t kAddressBytes = 4;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::uint32_t addresses(std::size_t n) { return static_cast<std::uint32_t>(n) * kAddressBytes; }

}  // namespace

std::string kind_name(const ControlPacket& pkt) {
  return std::visit(overloaded{
                        [](const ctl::Rreq&) { return "RREQ"; },
                        [](const ctl::Rrep&) { return "RREP"; },
                        [](const ctl::Rerr&) { return "RERR"; },
                        [](const ctl::Hello&) { return "HELLO"; },
                        [](const ctl::DsrRreq&) { return "DSR_RREQ"; },
                        [](const ctl::DsrRrep&) { return "DSR_RREP"; },
                        [](const ctl::GratRrep&) { return "GRAT_RREP"; },
                        [](const ctl::DsrRerr&) { return "DSR_RERR"; },
                        [](const ctl::FsrLsu&) { return "FSR_LSU"; },
                    },
                    pkt);
}

std::uint32_t size_bytes(const ControlPacket& pkt) {
  return std::visit(overloaded{
                        [](const ctl::Rreq&) -> std::uint32_t { return 24; },
                        [](const ctl::Rrep&) -> std::uint32_t { return 20; },
                        [](const ctl::Rerr& p) -> std::uint32_t {
                          return 4 + 8 * static_cast<std::uint32_t>(p.unreachable.size());
                        },
                        [](const ctl::Hello&) -> std::uint32_t { return 20; },
                        [](const ctl::DsrRreq& p) { return 8 + addresses(p.route.size()); },
                        [](const ctl::DsrRrep& p) { return 8 + addresses(p.route.size()); },
                        [](const ctl::GratRrep& p) { return 8 + addresses(p.route.size()); },
                        [](const ctl::DsrRerr& p) { return 16 + addresses(p.return_path.size()); },
                        [](const ctl::FsrLsu& p) {
                          std::uint32_t total = 4;
                          for (const auto& e : p.entries) total += 8 + addresses(e.neighbors.size());
                          return total;
                        },
                    },
                    pkt);
}

std::string Packet::kind_name() const {
  return is_data() ? std::string("DATA") : vanet::kind_name(control());
}

std::uint32_t Packet::size_bytes() const {
  return is_data() ? data().size : vanet::size_bytes(control());
}

}  // namespace vanet
