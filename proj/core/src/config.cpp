#include "vanet/config.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace vanet {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used == v.size() && std::isfinite(x)) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected a number, got '" + v + "'");
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    if (!v.empty() && v[0] != '-') {
      const auto x = std::stoull(v, &used);
      if (used == v.size()) return x;
    }
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
}

std::pair<double, double> parse_area(const std::string& v) {
  const auto x = v.find_first_of("xX");
  if (x == std::string::npos) throw ConfigError("area: expected WIDTHxHEIGHT, got '" + v + "'");
  return {parse_double("area", trim(v.substr(0, x))), parse_double("area", trim(v.substr(x + 1)))};
}

Flow parse_flow(const std::string& v) {
  const auto gt = v.find('>');
  if (gt == std::string::npos) throw ConfigError("flow: expected SRC>DST, got '" + v + "'");
  return {static_cast<NodeId>(parse_uint("flow", trim(v.substr(0, gt)))),
          static_cast<NodeId>(parse_uint("flow", trim(v.substr(gt + 1))))};
}

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void ScenarioConfig::set(const std::string& key, const std::string& value) {
  try {
    if (key == "area") {
      std::tie(area_width, area_height) = parse_area(value);
    } else if (key == "block_size") {
      block_size = parse_double(key, value);
    } else if (key == "node_count") {
      node_count = parse_uint(key, value);
    } else if (key == "cbr_flows") {
      cbr_flows = parse_uint(key, value);
    } else if (key == "flow") {
      flows.push_back(parse_flow(value));
    } else if (key == "packet_size") {
      packet_size = static_cast<std::uint32_t>(parse_uint(key, value));
    } else if (key == "cbr_rate") {
      cbr_rate = parse_double(key, value);
    } else if (key == "cbr_start") {
      cbr_start = parse_double(key, value);
    } else if (key == "cbr_packets") {
      cbr_packets = parse_uint(key, value);
    } else if (key == "speed") {
      speed_kph = parse_double(key, value);
    } else if (key == "range" || key == "channel.range_m") {
      range = parse_double(key, value);
    } else if (key == "mobility_step") {
      mobility_step = parse_double(key, value);
    } else if (key == "mobility_trace") {
      mobility_trace = value;
    } else if (key == "protocol") {
      protocol = routing::parse_protocol(value);
    } else if (key == "profile") {
      profile = routing::parse_profile(value);
    } else if (key.rfind("params.", 0) == 0) {
      const std::string field = key.substr(7);
      routing::ProtocolParams probe;
      probe.set(field, value);  // rejects unknown fields early
      param_overrides.emplace_back(field, value);
    } else if (key == "channel.fading") {
      fading = channel::parse_fading(value);
    } else if (key == "channel.m_schedule") {
      m_schedule = channel::parse_schedule(value);
    } else if (key == "channel.threshold") {
      threshold = parse_double(key, value);
    } else if (key == "duration") {
      duration = parse_double(key, value);
    } else if (key == "seed") {
      seed = parse_uint(key, value);
    } else if (key == "bitrate") {
      bitrate = parse_double(key, value);
    } else if (key == "processing_delay") {
      processing_delay = parse_double(key, value);
    } else if (key == "mac_retries") {
      mac_retries = static_cast<int>(parse_uint(key, value));
    } else if (key == "max_hops") {
      max_hops = static_cast<std::uint32_t>(parse_uint(key, value));
    } else if (key == "max_events") {
      max_events = parse_uint(key, value);
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

void ScenarioConfig::validate() const {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  require(area_width > 0 && area_height > 0, "area must be positive");
  require(block_size > 0 && block_size <= std::min(area_width, area_height),
          "block_size must be positive and fit the area");
  require(node_count >= 2, "node_count must be at least 2");
  const std::size_t flow_count = flows.empty() ? cbr_flows : flows.size();
  require(flow_count >= 1, "at least one CBR flow is required");
  require(flow_count <= node_count * (node_count - 1),
          "cbr_flows must not exceed node_count*(node_count-1)");
  for (const Flow& f : flows) {
    require(f.src < node_count && f.dst < node_count, "flow endpoint out of range");
    require(f.src != f.dst, "flow source and destination must differ");
  }
  require(packet_size > 0, "packet_size must be positive");
  require(cbr_rate > 0, "cbr_rate must be positive");
  require(cbr_start >= 0, "cbr_start must be non-negative");
  require(speed_kph >= 0, "speed must be non-negative");
  require(range > 0, "range must be positive");
  require(mobility_step > 0, "mobility_step must be positive");
  require(duration > 0, "duration must be positive");
  require(bitrate > 0, "bitrate must be positive");
  require(processing_delay >= 0, "processing_delay must be non-negative");
  require(mac_retries >= 1, "mac_retries must be at least 1");
  require(max_hops >= 1, "max_hops must be at least 1");
  require(max_events >= 1, "max_events must be at least 1");
  try {
    protocol_params().validate();
    channel_model().validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

routing::ProtocolParams ScenarioConfig::protocol_params() const {
  auto p = routing::ProtocolParams::defaults(protocol, profile);
  for (const auto& [field, value] : param_overrides) p.set(field, value);
  return p;
}

channel::ChannelModel ScenarioConfig::channel_model() const {
  channel::ChannelModel ch = channel::make_channel(range, fading);
  ch.m_schedule = m_schedule;
  if (threshold) {
    ch.threshold = *threshold;
  } else if (fading == channel::Fading::Nakagami) {
    ch.threshold = channel::calibrate_threshold(ch, 0.1);
  }
  return ch;
}

mobility::GridSpec ScenarioConfig::grid_spec() const {
  mobility::GridSpec g;
  g.grid = {area_width, area_height, block_size};
  g.node_count = node_count;
  g.speed = speed_kph / 3.6;
  return g;
}

ScenarioConfig ScenarioConfig::parse(std::istream& in) {
  ScenarioConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      cfg.set(key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

ScenarioConfig ScenarioConfig::parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

ScenarioConfig ScenarioConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  ScenarioConfig cfg = parse(in);
  // A relative trace path is taken relative to the config file.
  if (!cfg.mobility_trace.empty()) {
    const std::filesystem::path trace(cfg.mobility_trace);
    if (trace.is_relative()) {
      cfg.mobility_trace = (std::filesystem::path(path).parent_path() / trace).string();
    }
  }
  return cfg;
}

std::string ScenarioConfig::serialize() const {
  std::ostringstream o;
  o << "area = " << num(area_width) << "x" << num(area_height) << "\n";
  o << "block_size = " << num(block_size) << "\n";
  o << "node_count = " << node_count << "\n";
  o << "cbr_flows = " << cbr_flows << "\n";
  for (const Flow& f : flows) o << "flow = " << f.src << ">" << f.dst << "\n";
  o << "packet_size = " << packet_size << "\n";
  o << "cbr_rate = " << num(cbr_rate) << "\n";
  o << "cbr_start = " << num(cbr_start) << "\n";
  o << "cbr_packets = " << cbr_packets << "\n";
  o << "speed = " << num(speed_kph) << "\n";
  o << "range = " << num(range) << "\n";
  o << "mobility_step = " << num(mobility_step) << "\n";
  if (!mobility_trace.empty()) o << "mobility_trace = " << mobility_trace << "\n";
  o << "protocol = " << routing::to_string(protocol) << "\n";
  o << "profile = " << routing::to_string(profile) << "\n";
  for (const auto& [field, value] : param_overrides) {
    o << "params." << field << " = " << value << "\n";
  }
  o << "channel.fading = " << channel::to_string(fading) << "\n";
  o << "channel.m_schedule = " << channel::format_schedule(m_schedule) << "\n";
  if (threshold) o << "channel.threshold = " << num(*threshold) << "\n";
  o << "duration = " << num(duration) << "\n";
  o << "seed = " << seed << "\n";
  o << "bitrate = " << num(bitrate) << "\n";
  o << "processing_delay = " << num(processing_delay) << "\n";
  o << "mac_retries = " << mac_retries << "\n";
  o << "max_hops = " << max_hops << "\n";
  o << "max_events = " << max_events << "\n";
  return o.str();
}

}  // namespace vanet
