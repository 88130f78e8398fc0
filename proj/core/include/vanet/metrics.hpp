#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "vanet/routing/agent.hpp"

namespace vanet {

class UndefinedMetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct MetricsRecord {
  std::uint64_t data_sent = 0;
  std::uint64_t data_delivered = 0;
  double delay_sum = 0.0;
  /// Every hop-wise transmission of every control packet.
  std::uint64_t control_transmissions = 0;
  std::map<std::string, std::uint64_t> control_by_kind;
  std::array<std::uint64_t, std::size(routing::kAllDropCauses)> drops{};
  std::uint64_t in_flight_at_end = 0;
  std::uint64_t events = 0;
  std::uint64_t link_breaks = 0;

  std::uint64_t& drops_of(routing::DropCause c) { return drops[static_cast<std::size_t>(c)]; }
  std::uint64_t drops_of(routing::DropCause c) const {
    return drops[static_cast<std::size_t>(c)];
  }
  std::uint64_t total_drops() const;
  /// data_sent == data_delivered + in_flight_at_end + total_drops()
  bool conserved() const;
};

/// Percentage of sent data packets that were delivered.
double pdr(const MetricsRecord& m);
/// Mean delay of delivered packets in seconds.
double ae2ed(const MetricsRecord& m);
/// Control transmissions per delivered data packet.
double nro(const MetricsRecord& m);

struct RunLabel {
  std::string protocol;
  std::string profile;
  std::size_t nodes = 0;
  std::size_t flows = 0;
  std::uint64_t seed = 0;
};

/// "protocol,profile,nodes,flows,seed,pdr,ae2ed_s,nro"
std::string csv_header();
/// Undefined metrics are written as "NA".
std::string csv_row(const RunLabel& label, const MetricsRecord& m);
/// Multi-line human readable breakdown (drops by cause, control by kind).
std::string summary(const MetricsRecord& m);

}  // namespace vanet
