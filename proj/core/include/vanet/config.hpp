#pragma once

// Scenario description: a flat `key = value` text format with `#` comments.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vanet/channel.hpp"
#include "vanet/mobility.hpp"
#include "vanet/routing/params.hpp"

namespace vanet {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Flow {
  NodeId src = 0;
  NodeId dst = 0;
  bool operator==(const Flow&) const = default;
};

struct ScenarioConfig {
  double area_width = 4000.0;
  double area_height = 4000.0;
  double block_size = 400.0;
  std::size_t node_count = 20;

  std::size_t cbr_flows = 6;
  /// Explicit flows; when empty, `cbr_flows` random distinct pairs are drawn.
  std::vector<Flow> flows;
  std::uint32_t packet_size = 1000;
  double cbr_rate = 4.0;          ///< packets per second per flow
  double cbr_start = 1.0;         ///< first flow starts here, the rest are staggered
  std::uint64_t cbr_packets = 0;  ///< per flow; 0 means until the end of the run

  double speed_kph = 40.0;
  double range = 300.0;
  double mobility_step = 0.1;
  std::string mobility_trace;  ///< optional trace file replacing the grid model

  routing::Protocol protocol = routing::Protocol::Aodv;
  routing::Profile profile = routing::Profile::Default;
  std::vector<std::pair<std::string, std::string>> param_overrides;

  channel::Fading fading = channel::Fading::Nakagami;
  std::vector<channel::ShapeStage> m_schedule = channel::ChannelModel::default_schedule();
  std::optional<double> threshold;  ///< calibrated from the range when unset

  double duration = 600.0;  ///< s; shorter runs leave sparse scenarios with no deliveries
  std::uint64_t seed = 1;

  double bitrate = 6e6;             ///< bit/s
  double processing_delay = 0.001;  ///< s per hop
  int mac_retries = 4;
  std::uint32_t max_hops = 64;
  std::uint64_t max_events = 50'000'000;

  /// Throws ConfigError.
  void validate() const;
  /// Profile defaults with the `params.*` overrides applied.
  routing::ProtocolParams protocol_params() const;
  channel::ChannelModel channel_model() const;
  mobility::GridSpec grid_spec() const;

  /// Applies one key. Throws ConfigError on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);

  static ScenarioConfig parse(std::istream& in);
  static ScenarioConfig parse_string(const std::string& text);
  static ScenarioConfig load(const std::string& path);
  /// Canonical text form; parse(serialize()) reproduces the config.
  std::string serialize() const;
};

}  // namespace vanet
