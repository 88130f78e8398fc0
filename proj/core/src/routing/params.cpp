#include "vanet/routing/params.hpp"

#include <algorithm>
#include <stdexcept>

namespace vanet::routing {
namespace {

int to_int(const std::string& field, const std::string& value) {
  std::size_t used = 0;
  const long v = std::stol(value, &used);
  if (used != value.size()) throw std::invalid_argument("params." + field + ": not an integer");
  return static_cast<int>(v);
}

double to_double(const std::string& field, const std::string& value) {
  std::size_t used = 0;
  const double v = std::stod(value, &used);
  if (used != value.size()) throw std::invalid_argument("params." + field + ": not a number");
  return v;
}

bool to_bool(const std::string& field, const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw std::invalid_argument("params." + field + ": expected true/false");
}

}  // namespace

ProtocolParams ProtocolParams::defaults(Protocol protocol, Profile profile) {
  ProtocolParams p;
  p.protocol = protocol;
  p.profile = profile;
  if (profile == Profile::Modified) {
    p.aodv.net_diameter = 20;
    p.aodv.ttl_start = 2;
    p.aodv.ttl_threshold = 9;
    p.dsr.cache_capacity = 32;
    p.dsr.send_buffer_capacity = 128;
    p.fsr.inner_interval = 2.5;
    p.fsr.outer_interval = 7.5;
  }
  return p;
}

void ProtocolParams::validate() const {
  if (aodv.net_diameter < 1 || aodv.ttl_start < 1 || aodv.ttl_increment < 1 ||
      aodv.ttl_threshold < 1 || aodv.allowed_hello_loss < 1 || !(aodv.hello_interval > 0.0)) {
    throw std::invalid_argument("AODV counts must be >= 1 and hello_interval > 0");
  }
  if (aodv.ttl_start > aodv.net_diameter) {
    throw std::invalid_argument("AODV ttl_start must not exceed net_diameter");
  }
  if (dsr.cache_capacity < 1 || dsr.send_buffer_capacity < 1) {
    throw std::invalid_argument("DSR capacities must be >= 1");
  }
  if (fsr.inner_scope_hops < 1 || !(fsr.inner_interval > 0.0) || !(fsr.outer_interval > 0.0)) {
    throw std::invalid_argument("FSR scope must be >= 1 and intervals > 0");
  }
}

void ProtocolParams::set(const std::string& field, const std::string& value) {
  if (field == "net_diameter") {
    aodv.net_diameter = to_int(field, value);
  } else if (field == "ttl_start") {
    aodv.ttl_start = to_int(field, value);
  } else if (field == "ttl_increment") {
    aodv.ttl_increment = to_int(field, value);
  } else if (field == "ttl_threshold") {
    aodv.ttl_threshold = to_int(field, value);
  } else if (field == "hello_interval") {
    aodv.hello_interval = to_double(field, value);
  } else if (field == "allowed_hello_loss") {
    aodv.allowed_hello_loss = to_int(field, value);
  } else if (field == "enable_llr") {
    aodv.enable_llr = to_bool(field, value);
  } else if (field == "cache_capacity") {
    dsr.cache_capacity = static_cast<std::size_t>(std::max(0, to_int(field, value)));
  } else if (field == "send_buffer_capacity") {
    dsr.send_buffer_capacity = static_cast<std::size_t>(std::max(0, to_int(field, value)));
  } else if (field == "enable_grat_rrep") {
    dsr.enable_grat_rrep = to_bool(field, value);
  } else if (field == "enable_route_reversal") {
    dsr.enable_route_reversal = to_bool(field, value);
  } else if (field == "inner_scope_hops") {
    fsr.inner_scope_hops = to_int(field, value);
  } else if (field == "inner_interval") {
    fsr.inner_interval = to_double(field, value);
  } else if (field == "outer_interval") {
    fsr.outer_interval = to_double(field, value);
  } else {
    throw std::invalid_argument("unknown protocol parameter 'params." + field + "'");
  }
}

std::string ProtocolParams::label() const {
  return (profile == Profile::Modified ? "MOD-" : "") + to_string(protocol);
}

Protocol parse_protocol(const std::string& text) {
  if (text == "aodv" || text == "AODV") return Protocol::Aodv;
  if (text == "dsr" || text == "DSR") return Protocol::Dsr;
  if (text == "fsr" || text == "FSR") return Protocol::Fsr;
  throw std::invalid_argument("protocol must be aodv, dsr or fsr");
}

Profile parse_profile(const std::string& text) {
  if (text == "default") return Profile::Default;
  if (text == "modified" || text == "mod") return Profile::Modified;
  throw std::invalid_argument("profile must be 'default' or 'modified'");
}

std::string to_string(Protocol p) {
  switch (p) {
    case Protocol::Aodv: return "AODV";
    case Protocol::Dsr: return "DSR";
    case Protocol::Fsr: return "FSR";
  }
  return "?";
}

std::string to_string(Profile p) { return p == Profile::Default ? "default" : "modified"; }

}  // namespace vanet::routing
