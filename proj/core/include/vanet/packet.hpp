#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "vanet/types.hpp"

namespace vanet {

/// CBR payload packet. `path` is maintained by the engine: every node that
/// successfully receives the packet is appended.
struct DataPacket {
  std::uint64_t uid = 0;
  NodeId origin = 0;
  NodeId dest = 0;
  SimTime created = 0.0;
  std::uint32_t size = 1000;
  std::vector<NodeId> path;
  /// DSR source route, origin first and destination last.
  std::vector<NodeId> source_route;
  std::uint32_t salvage_count = 0;
};

namespace ctl {

// --- AODV ---
struct Rreq {
  NodeId origin = 0;
  NodeId dest = 0;
  std::uint32_t id = 0;
  std::uint32_t hop_count = 0;
  /// Remaining rebroadcasts; a receiver relays only while ttl >= 1.
  std::uint32_t ttl = 0;
  std::uint32_t origin_seq = 0;
  std::uint32_t dest_seq = 0;
  bool dest_seq_unknown = true;
};

/// Travels from the responder back toward `origin`, advertising a route to `dest`.
struct Rrep {
  NodeId origin = 0;
  NodeId dest = 0;
  std::uint32_t hop_count = 0;
  std::uint32_t dest_seq = 0;
  double lifetime = 0.0;
};

struct Rerr {
  std::vector<std::pair<NodeId, std::uint32_t>> unreachable;
};

struct Hello {};

// --- DSR ---
struct DsrRreq {
  NodeId origin = 0;
  NodeId dest = 0;
  std::uint32_t id = 0;
  std::vector<NodeId> route;  ///< accumulated, origin first
};

/// `route` is the discovered origin..dest path; `reply_path` is the path the
/// reply itself follows, starting at the replying node and ending at origin.
struct DsrRrep {
  std::vector<NodeId> route;
  std::vector<NodeId> reply_path;
};

/// Reply generated from an intermediate node's cache.
struct GratRrep {
  std::vector<NodeId> route;
  std::vector<NodeId> reply_path;
};

/// Reports the broken hop from -> to back to the data packet's origin along
/// `return_path` (reporting node first).
struct DsrRerr {
  NodeId from = 0;
  NodeId to = 0;
  std::vector<NodeId> return_path;
};

// --- FSR ---
enum class Scope : std::uint8_t { Inner, Outer };

struct LsuEntry {
  NodeId origin = 0;
  std::uint32_t seq = 0;
  std::vector<NodeId> neighbors;
};

struct FsrLsu {
  std::vector<LsuEntry> entries;
  Scope scope = Scope::Inner;
};

}  // namespace ctl

using ControlPacket = std::variant<ctl::Rreq, ctl::Rrep, ctl::Rerr, ctl::Hello, ctl::DsrRreq,
                                   ctl::DsrRrep, ctl::GratRrep, ctl::DsrRerr, ctl::FsrLsu>;

/// Name used in logs and per-kind counters, e.g. "RREQ", "DSR_RREP", "FSR_LSU".
std::string kind_name(const ControlPacket& pkt);
std::uint32_t size_bytes(const ControlPacket& pkt);

struct Packet {
  std::variant<DataPacket, ControlPacket> body;

  bool is_data() const { return std::holds_alternative<DataPacket>(body); }
  const DataPacket& data() const { return std::get<DataPacket>(body); }
  DataPacket& data() { return std::get<DataPacket>(body); }
  const ControlPacket& control() const { return std::get<ControlPacket>(body); }

  std::string kind_name() const;
  std::uint32_t size_bytes() const;
};

}  // namespace vanet
