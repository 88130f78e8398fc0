#pragma once

#include <cstddef>
#include <string>

namespace vanet::routing {

enum class Protocol { Aodv, Dsr, Fsr };
enum class Profile { Default, Modified };

struct AodvParams {
  int net_diameter = 35;
  int ttl_start = 1;
  int ttl_increment = 2;
  int ttl_threshold = 7;
  double hello_interval = 1.0;
  int allowed_hello_loss = 2;
  bool enable_llr = true;
};

struct DsrParams {
  std::size_t cache_capacity = 64;
  std::size_t send_buffer_capacity = 64;
  bool enable_grat_rrep = true;
  bool enable_route_reversal = true;
};

struct FsrParams {
  int inner_scope_hops = 2;
  double inner_interval = 5.0;
  double outer_interval = 15.0;
};

/// Protocol selection plus the knobs of all three protocols; only the block
/// matching `protocol` is used.
///
/// The modified profiles move exactly the named fields: AODV shrinks the
/// network diameter and raises the TTL start and threshold, DSR halves the
/// cache and doubles the send buffer, FSR halves both update intervals.
struct ProtocolParams {
  Protocol protocol = Protocol::Aodv;
  Profile profile = Profile::Default;
  AodvParams aodv;
  DsrParams dsr;
  FsrParams fsr;

  static ProtocolParams defaults(Protocol protocol, Profile profile);

  void validate() const;
  /// Applies one `params.<field>` override, e.g. set("ttl_start", "3").
  void set(const std::string& field, const std::string& value);
  /// "AODV", "MOD-AODV", ...
  std::string label() const;
};

Protocol parse_protocol(const std::string& text);
Profile parse_profile(const std::string& text);
std::string to_string(Protocol p);
std::string to_string(Profile p);

}  // namespace vanet::routing
