#pragma once

// Discrete-event simulation of one scenario: vehicle mobility, the radio
// channel, per-node routing agents and CBR traffic.
//
// The MAC is abstracted. Each node serialises its transmissions through a
// FIFO (size/bitrate plus a fixed processing delay per hop); a unicast
// succeeds when the receiver is in range and one of `mac_retries` channel
// draws succeeds, otherwise the sender is told about a link break. A
// broadcast is received independently by every in-range node.

#include <functional>
#include <iosfwd>
#include <memory>
#include <stdexcept>

#include "vanet/config.hpp"
#include "vanet/metrics.hpp"

namespace vanet {

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunResult {
  MetricsRecord metrics;
  std::vector<Flow> flows;  ///< flows actually simulated
};

class Simulator {
 public:
  /// Called for every delivered packet with its full traversed path.
  using DeliveryObserver = std::function<void(const DataPacket&, SimTime)>;

  /// Validates the config; throws ConfigError.
  explicit Simulator(ScenarioConfig cfg);
  ~Simulator();
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  /// Event log sink, one line per event: "time kind node detail".
  void set_event_log(std::ostream* log);
  void set_delivery_observer(DeliveryObserver obs);

  /// Runs [0, duration). May be called once. Throws SimulationError when the
  /// event cap is hit.
  RunResult run();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Convenience wrapper around Simulator.
RunResult simulate(const ScenarioConfig& cfg, std::ostream* log = nullptr);

/// Flows used for a config: the explicit list, or `cbr_flows` distinct
/// random ordered pairs drawn from the traffic stream.
std::vector<Flow> choose_flows(const ScenarioConfig& cfg);

RunLabel label_for(const ScenarioConfig& cfg);

}  // namespace vanet
