#include <doctest.h>

#include "vanet/metrics.hpp"

using namespace vanet;

TEST_SUITE("metrics") {
  TEST_CASE("packet delivery ratio") {
    MetricsRecord m;
    m.data_sent = 100;
    m.data_delivered = 87;
    CHECK(pdr(m) == doctest::Approx(87.0));
    m.data_sent = 10;
    m.data_delivered = 10;
    CHECK(pdr(m) == doctest::Approx(100.0));
    CHECK_THROWS_AS(pdr(MetricsRecord{}), UndefinedMetricError);
  }

  TEST_CASE("average end-to-end delay") {
    MetricsRecord m;
    m.data_sent = m.data_delivered = 1;
    m.delay_sum = 0.05;
    CHECK(ae2ed(m) == doctest::Approx(0.05));
    m.data_sent = m.data_delivered = 2;
    m.delay_sum = 0.1 + 0.3;
    CHECK(ae2ed(m) == doctest::Approx(0.2));
    m.data_delivered = 0;
    CHECK_THROWS_AS(ae2ed(m), UndefinedMetricError);
  }

  TEST_CASE("normalised routing overhead") {
    MetricsRecord m;
    m.data_sent = 5;
    m.data_delivered = 2;
    CHECK(nro(m) == 0.0);
    m.control_transmissions = 4;
    CHECK(nro(m) == doctest::Approx(2.0));
    m.data_delivered = 0;
    CHECK_THROWS_AS(nro(m), UndefinedMetricError);
  }

  TEST_CASE("conservation bookkeeping") {
    MetricsRecord m;
    m.data_sent = 10;
    m.data_delivered = 6;
    m.in_flight_at_end = 1;
    m.drops_of(routing::DropCause::NoRoute) = 2;
    CHECK_FALSE(m.conserved());
    m.drops_of(routing::DropCause::Loop) = 1;
    CHECK(m.total_drops() == 3);
    CHECK(m.conserved());
  }

  TEST_CASE("csv rows") {
    MetricsRecord m;
    m.data_sent = 4;
    m.data_delivered = 2;
    m.delay_sum = 0.5;
    m.control_transmissions = 3;
    RunLabel l{"AODV", "default", 20, 6, 1};
    CHECK(csv_header() == "protocol,profile,nodes,flows,seed,pdr,ae2ed_s,nro");
    CHECK(csv_row(l, m) == "AODV,default,20,6,1,50.000000,0.250000000,1.500000");
    m.data_delivered = 0;
    CHECK(csv_row(l, m) == "AODV,default,20,6,1,0.000000,NA,NA");
    CHECK(summary(m).find("no_route") != std::string::npos);
  }
}
