#include "vanet/mobility.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace vanet::mobility {
namespace {

bool is_multiple(double extent, double block) {
  const double q = extent / block;
  return std::fabs(q - std::round(q)) <= 1e-9 * std::max(1.0, q);
}

Heading turn_left(Heading h) { return static_cast<Heading>((static_cast<int>(h) + 1) % 4); }
Heading turn_right(Heading h) { return static_cast<Heading>((static_cast<int>(h) + 3) % 4); }

bool can_leave(const VehicleState& v, Heading h, const RoadGrid& g, double eps) {
  switch (h) {
    case Heading::East: return v.x < g.width - eps;
    case Heading::West: return v.x > eps;
    case Heading::North: return v.y < g.height - eps;
    case Heading::South: return v.y > eps;
  }
  return false;
}

void choose_at_intersection(VehicleState& v, const RoadGrid& g, double eps, RandomStream& rng) {
  if (!can_leave(v, v.heading, g, eps)) {
    v.heading = reverse(v.heading);
    return;
  }
  std::array<Heading, 3> options{};
  std::size_t n = 0;
  for (Heading h : {v.heading, turn_left(v.heading), turn_right(v.heading)}) {
    if (can_leave(v, h, g, eps)) options[n++] = h;
  }
  if (n > 1) v.heading = options[rng.index(n)];
}

void advance(VehicleState& v, const RoadGrid& g, double dist, RandomStream& rng) {
  const double eps = 1e-9 * g.block;
  while (dist > 0.0) {
    const bool horizontal = is_horizontal(v.heading);
    double& along = horizontal ? v.x : v.y;
    const double limit = horizontal ? g.width : g.height;
    const bool forward = v.heading == Heading::East || v.heading == Heading::North;
    const double k = along / g.block;
    const double next = forward ? (std::floor(k + 1e-9) + 1.0) * g.block
                                : (std::ceil(k - 1e-9) - 1.0) * g.block;
    if (next > limit + eps || next < -eps) {
      // Facing out of the area from a boundary road.
      along = std::round(k) * g.block;
      choose_at_intersection(v, g, eps, rng);
      continue;
    }
    const double gap = std::fabs(next - along);
    if (dist < gap - eps) {
      along += forward ? dist : -dist;
      return;
    }
    along = next;
    dist = std::max(0.0, dist - gap);
    choose_at_intersection(v, g, eps, rng);
  }
}

}  // namespace

double heading_degrees(Heading h) { return 90.0 * static_cast<int>(h); }

Heading heading_from_degrees(double deg) {
  double wrapped = std::fmod(deg, 360.0);
  if (wrapped < 0.0) wrapped += 360.0;
  const int quadrant = static_cast<int>(std::lround(wrapped / 90.0)) % 4;
  return static_cast<Heading>(quadrant);
}

Heading reverse(Heading h) { return static_cast<Heading>((static_cast<int>(h) + 2) % 4); }

bool is_horizontal(Heading h) { return h == Heading::East || h == Heading::West; }

void RoadGrid::validate() const {
  if (!(width > 0.0 && height > 0.0 && block > 0.0)) {
    throw std::invalid_argument("road grid extents and block size must be positive");
  }
  if (!is_multiple(width, block) || !is_multiple(height, block)) {
    throw std::invalid_argument("block size must divide both grid extents");
  }
}

int RoadGrid::columns() const { return static_cast<int>(std::lround(width / block)) + 1; }

int RoadGrid::rows() const { return static_cast<int>(std::lround(height / block)) + 1; }

double RoadGrid::distance_to_road(double x, double y) const {
  const double dx = std::fabs(x - std::round(x / block) * block);
  const double dy = std::fabs(y - std::round(y / block) * block);
  return std::min(dx, dy);
}

double distance(const VehicleState& a, const VehicleState& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

std::pair<RoadGrid, std::vector<VehicleState>> build_grid(const GridSpec& spec,
                                                          std::uint64_t seed) {
  spec.grid.validate();
  if (spec.node_count < 2) throw std::invalid_argument("need at least two vehicles");
  if (!(spec.speed >= 0.0) || !std::isfinite(spec.speed)) {
    throw std::invalid_argument("vehicle speed must be finite and non-negative");
  }
  const RoadGrid& g = spec.grid;
  RandomStream rng(seed, StreamId::Placement);
  std::vector<VehicleState> states;
  states.reserve(spec.node_count);
  for (std::size_t i = 0; i < spec.node_count; ++i) {
    VehicleState v;
    v.id = static_cast<NodeId>(i);
    v.speed = spec.speed;
    v.heading = static_cast<Heading>(rng.index(4));
    if (is_horizontal(v.heading)) {
      v.y = static_cast<double>(rng.index(static_cast<std::size_t>(g.rows()))) * g.block;
      v.x = rng.uniform(0.0, g.width);
    } else {
      v.x = static_cast<double>(rng.index(static_cast<std::size_t>(g.columns()))) * g.block;
      v.y = rng.uniform(0.0, g.height);
    }
    states.push_back(v);
  }
  return {g, std::move(states)};
}

void step(std::vector<VehicleState>& states, const RoadGrid& grid, double dt,
          RandomStream& rng) {
  if (!(dt > 0.0)) throw std::invalid_argument("mobility step needs dt > 0");
  for (VehicleState& v : states) {
    if (v.speed > 0.0) advance(v, grid, v.speed * dt, rng);
  }
}

void EncounterScenario::validate() const {
  if (!(d0 > 0.0 && d0 <= r)) throw std::invalid_argument("encounter needs 0 < d0 <= r");
  if (!(v2 > 0.0) || !std::isfinite(v2)) {
    throw std::invalid_argument("encounter needs a positive finite v2");
  }
}

double link_lifetime(const EncounterScenario& s) {
  s.validate();
  const double a = s.encounter.ratio();
  switch (s.encounter.kind()) {
    case analytics::CaseKind::Case1: return std::numeric_limits<double>::infinity();
    case analytics::CaseKind::Case2: return (s.r - s.d0) / ((a - 1.0) * s.v2);
    case analytics::CaseKind::Case3: return (s.d0 + s.r) / (2.0 * s.v2);
    case analytics::CaseKind::Case4: return (s.d0 + s.r) / ((a + 1.0) * s.v2);
  }
  return 0.0;
}

std::pair<RoadGrid, std::vector<VehicleState>> encounter_setup(const EncounterScenario& s,
                                                               double horizon) {
  s.validate();
  const double a = s.encounter.ratio();
  const double reach = s.d0 + s.r + a * s.v2 * horizon;
  const double side = 2.0 * std::ceil(reach + 1000.0);
  RoadGrid grid{side, side, side};
  const double x0 = 0.5 * side - 0.5 * s.d0;

  VehicleState rear{0, x0, 0.0, Heading::East, s.v2};
  VehicleState front{1, x0 + s.d0, 0.0, Heading::East, s.v2};
  switch (s.encounter.kind()) {
    case analytics::CaseKind::Case1: break;
    case analytics::CaseKind::Case2: front.speed = a * s.v2; break;
    case analytics::CaseKind::Case3: front.heading = Heading::West; break;
    case analytics::CaseKind::Case4:
      rear.speed = a * s.v2;
      front.heading = Heading::West;
      break;
  }
  return {grid, {rear, front}};
}

double simulate_link_break(const EncounterScenario& s, double dt, double horizon) {
  auto [grid, states] = encounter_setup(s, horizon);
  RandomStream rng(0, StreamId::Mobility);
  const auto steps = static_cast<long>(std::ceil(horizon / dt));
  for (long k = 1; k <= steps; ++k) {
    step(states, grid, dt, rng);
    if (distance(states[0], states[1]) > s.r) return static_cast<double>(k) * dt;
  }
  return std::numeric_limits<double>::infinity();
}

void write_trace_line(std::ostream& out, double time, const VehicleState& v) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::fixed << std::setprecision(3) << time << ' ' << v.id << ' '
      << std::setprecision(6) << v.x << ' ' << v.y << ' ' << std::setprecision(1)
      << heading_degrees(v.heading) << ' ' << std::setprecision(6) << v.speed << '\n';
  out.flags(flags);
  out.precision(precision);
}

void MobilityTrace::add(double time, const VehicleState& v) { samples_[time].push_back(v); }

MobilityTrace MobilityTrace::parse(std::istream& in) {
  MobilityTrace trace;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    double t = 0.0;
    long id = 0;
    double x = 0.0;
    double y = 0.0;
    double deg = 0.0;
    double speed = 0.0;
    if (!(fields >> t >> id >> x >> y >> deg >> speed) || id < 0 || t < 0.0 || speed < 0.0) {
      throw std::invalid_argument("mobility trace line " + std::to_string(line_no) +
                                  ": expected 'time_s node_id x_m y_m heading_deg speed_mps'");
    }
    trace.add(t, VehicleState{static_cast<NodeId>(id), x, y, heading_from_degrees(deg), speed});
  }
  return trace;
}

MobilityTrace MobilityTrace::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open mobility trace '" + path + "'");
  return parse(in);
}

std::size_t MobilityTrace::node_count() const {
  NodeId max_id = 0;
  bool any = false;
  for (const auto& [t, states] : samples_) {
    for (const auto& v : states) {
      max_id = std::max(max_id, v.id);
      any = true;
    }
  }
  return any ? static_cast<std::size_t>(max_id) + 1 : 0;
}

std::vector<VehicleState> MobilityTrace::states_at(double time) const {
  const std::size_t n = node_count();
  std::vector<VehicleState> out(n);
  std::vector<bool> seen(n, false);
  const auto end = samples_.upper_bound(time + 1e-9);
  for (auto it = samples_.begin(); it != end; ++it) {
    for (const auto& v : it->second) {
      out[v.id] = v;
      seen[v.id] = true;
    }
  }
  for (auto it = end; it != samples_.end(); ++it) {
    for (const auto& v : it->second) {
      if (!seen[v.id]) {
        out[v.id] = v;
        seen[v.id] = true;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen[i]) {
      throw std::invalid_argument("mobility trace has no samples for node " + std::to_string(i));
    }
  }
  return out;
}

}  // namespace vanet::mobility
