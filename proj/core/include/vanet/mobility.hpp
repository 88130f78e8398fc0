#pragma once

// Manhattan-grid vehicle mobility and two-vehicle encounter kinematics.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "vanet/analytics.hpp"
#include "vanet/rng.hpp"
#include "vanet/types.hpp"

namespace vanet::mobility {

/// Axis-aligned travel direction; the numeric value times 90 is the heading
/// in degrees, counter-clockwise from east.
enum class Heading : std::uint8_t { East = 0, North = 1, West = 2, South = 3 };

double heading_degrees(Heading h);
Heading heading_from_degrees(double deg);
Heading reverse(Heading h);
bool is_horizontal(Heading h);

/// Bidirectional roads along every grid line x = k * block, y = k * block.
struct RoadGrid {
  double width = 4000.0;
  double height = 4000.0;
  double block = 400.0;

  void validate() const;
  int columns() const;  ///< number of vertical roads
  int rows() const;     ///< number of horizontal roads
  /// Distance from (x, y) to the nearest road centre line.
  double distance_to_road(double x, double y) const;
};

struct VehicleState {
  NodeId id = 0;
  double x = 0.0;
  double y = 0.0;
  Heading heading = Heading::East;
  double speed = 0.0;  ///< m/s
};

double distance(const VehicleState& a, const VehicleState& b);

/// Parameters for random grid placement.
struct GridSpec {
  RoadGrid grid;
  std::size_t node_count = 20;
  double speed = 40.0 / 3.6;  ///< m/s
};

/// Places vehicles uniformly on the road network with headings uniform over
/// the four axis directions. Deterministic per seed.
std::pair<RoadGrid, std::vector<VehicleState>> build_grid(const GridSpec& spec,
                                                          std::uint64_t seed);

/// Advances every vehicle by speed * dt. At an intersection the vehicle picks
/// uniformly among straight/left/right continuations that stay inside the
/// area; when straight ahead would leave the area it makes a U-turn.
void step(std::vector<VehicleState>& states, const RoadGrid& grid, double dt,
          RandomStream& rng);

/// Two vehicles on a straight road, set up for one encounter case.
struct EncounterScenario {
  analytics::EncounterCase encounter = analytics::EncounterCase::case1();
  double d0 = 100.0;  ///< initial separation (m)
  double r = 300.0;   ///< radio range (m)
  double v2 = 10.0;   ///< speed of the slower vehicle (m/s)

  void validate() const;
};

/// Closed-form time until the separation first exceeds r; +inf for Case 1.
double link_lifetime(const EncounterScenario& s);

/// Initial states for the scenario on a straight east-west road of a grid
/// large enough that no intersection is reached within `horizon` seconds.
std::pair<RoadGrid, std::vector<VehicleState>> encounter_setup(const EncounterScenario& s,
                                                               double horizon);

/// Steps the two vehicles with `step` and returns the first sample time at
/// which their separation exceeds r, or +inf if it does not happen before
/// `horizon`.
double simulate_link_break(const EncounterScenario& s, double dt, double horizon);

// Plain-text trace: one line per sample, "time_s node_id x_m y_m heading_deg speed_mps".

void write_trace_line(std::ostream& out, double time, const VehicleState& v);

/// Trace samples keyed by time, each holding the states recorded at that time.
class MobilityTrace {
 public:
  void add(double time, const VehicleState& v);
  static MobilityTrace parse(std::istream& in);
  static MobilityTrace load(const std::string& path);

  bool empty() const { return samples_.empty(); }
  std::size_t node_count() const;
  /// Latest recorded state of every node at or before `time`. Nodes not yet
  /// recorded take their first recorded state.
  std::vector<VehicleState> states_at(double time) const;

 private:
  std::map<double, std::vector<VehicleState>> samples_;
};

}  // namespace vanet::mobility
