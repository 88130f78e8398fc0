#include "vanet/metrics.hpp"

#include <cstdio>
#include <numeric>
#include <sstream>

namespace vanet {
namespace {

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

template <typename F>
std::string or_na(F&& f, const char* format) {
  try {
    return fmt(format, f());
  } catch (const UndefinedMetricError&) {
    return "NA";
  }
}

}  // namespace

std::uint64_t MetricsRecord::total_drops() const {
  return std::accumulate(drops.begin(), drops.end(), std::uint64_t{0});
}

bool MetricsRecord::conserved() const {
  return data_sent == data_delivered + in_flight_at_end + total_drops();
}

double pdr(const MetricsRecord& m) {
  if (m.data_sent == 0) throw UndefinedMetricError("PDR undefined: no data packets sent");
  return 100.0 * static_cast<double>(m.data_delivered) / static_cast<double>(m.data_sent);
}

double ae2ed(const MetricsRecord& m) {
  if (m.data_delivered == 0) throw UndefinedMetricError("AE2ED undefined: nothing delivered");
  return m.delay_sum / static_cast<double>(m.data_delivered);
}

double nro(const MetricsRecord& m) {
  if (m.data_delivered == 0) throw UndefinedMetricError("NRO undefined: nothing delivered");
  return static_cast<double>(m.control_transmissions) / static_cast<double>(m.data_delivered);
}

std::string csv_header() { return "protocol,profile,nodes,flows,seed,pdr,ae2ed_s,nro"; }

std::string csv_row(const RunLabel& l, const MetricsRecord& m) {
  std::ostringstream o;
  o << l.protocol << ',' << l.profile << ',' << l.nodes << ',' << l.flows << ',' << l.seed << ','
    << or_na([&] { return pdr(m); }, "%.6f") << ','
    << or_na([&] { return ae2ed(m); }, "%.9f") << ','
    << or_na([&] { return nro(m); }, "%.6f");
  return o.str();
}

std::string summary(const MetricsRecord& m) {
  std::ostringstream o;
  o << "data_sent " << m.data_sent << "\n";
  o << "data_delivered " << m.data_delivered << "\n";
  o << "in_flight_at_end " << m.in_flight_at_end << "\n";
  for (auto c : routing::kAllDropCauses) {
    o << "drop." << routing::to_string(c) << " " << m.drops_of(c) << "\n";
  }
  o << "control_transmissions " << m.control_transmissions << "\n";
  for (const auto& [kind, n] : m.control_by_kind) o << "control." << kind << " " << n << "\n";
  o << "link_breaks " << m.link_breaks << "\n";
  o << "events " << m.events << "\n";
  o << "pdr " << or_na([&] { return pdr(m); }, "%.6f") << "\n";
  o << "ae2ed_s " << or_na([&] { return ae2ed(m); }, "%.9f") << "\n";
  o << "nro " << or_na([&] { return nro(m); }, "%.6f") << "\n";
  return o.str();
}

}  // namespace vanet
