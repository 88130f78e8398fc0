#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "vanet/engine.hpp"

using namespace vanet;

namespace {

const std::string kDir = VANET_ORACLE_DIR;

std::string without_mobility(const std::string& log) {
  std::istringstream in(log);
  std::string line;
  std::string out;
  while (std::getline(in, line)) {
    if (line.find(" mobility-sample ") != std::string::npos) continue;
    out += line + '\n';
  }
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Expected {
  const char* name;
  std::uint64_t control;
  double nro;
  double ae2ed;
};

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("canonical three-node traces") {
    const Expected cases[] = {
        {"aodv", 10, 2.5, 0.005696},
        {"dsr", 4, 1.0, 0.005689333},
        {"fsr", 18, 4.5, 0.004666667},
    };
    for (const auto& e : cases) {
      INFO(e.name);
      const auto cfg = ScenarioConfig::load(kDir + "/canonical_" + e.name + ".conf");
      std::ostringstream log;
      const auto r = simulate(cfg, &log);
      CHECK(without_mobility(log.str()) == slurp(kDir + "/canonical_" + e.name + ".log"));
      CHECK(r.metrics.data_sent == 4);
      CHECK(pdr(r.metrics) == 100.0);
      CHECK(r.metrics.control_transmissions == e.control);
      CHECK(nro(r.metrics) == doctest::Approx(e.nro).epsilon(1e-12));
      CHECK(ae2ed(r.metrics) == doctest::Approx(e.ae2ed).epsilon(1e-6));
      CHECK(r.metrics.conserved());
    }
  }

  TEST_CASE("aodv canonical control breakdown") {
    const auto cfg = ScenarioConfig::load(kDir + "/canonical_aodv.conf");
    const auto r = simulate(cfg);
    CHECK(r.metrics.control_by_kind.at("HELLO") == 6);
    CHECK(r.metrics.control_by_kind.at("RREQ") == 2);
    CHECK(r.metrics.control_by_kind.at("RREP") == 2);
  }
}
