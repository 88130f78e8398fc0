#include <doctest.h>

#include <cmath>

#include "vanet/analytics.hpp"

using namespace vanet::analytics;

TEST_SUITE("analytics") {
  TEST_CASE("relative speed by the cosine law") {
    CHECK(relative_speed({10, 10, 0}) == doctest::Approx(0.0));
    CHECK(relative_speed({20, 10, kPi}) == doctest::Approx(30.0));
    CHECK(relative_speed({3, 4, kPi / 2}) == doctest::Approx(5.0));
    CHECK_THROWS_AS(relative_speed({-1, 4, 0}), std::domain_error);
    CHECK_THROWS_AS(relative_speed({1, 4, 4.0}), std::domain_error);
  }

  TEST_CASE("case classification") {
    auto c1 = classify_case({10, 10, 0});
    REQUIRE(c1);
    CHECK(c1->kind() == CaseKind::Case1);
    auto c4 = classify_case({20, 10, kPi});
    REQUIRE(c4);
    CHECK(c4->kind() == CaseKind::Case4);
    CHECK(c4->ratio() == doctest::Approx(2.0));
    CHECK_FALSE(classify_case({10, 10, kPi / 2}));
    auto c3 = classify_case({10, 10.05, kPi});
    REQUIRE(c3);
    CHECK(c3->kind() == CaseKind::Case3);
    auto c2 = classify_case({15, 10, 0});
    REQUIRE(c2);
    CHECK(c2->kind() == CaseKind::Case2);
    // a >= 3 falls outside what case 2 admits
    CHECK_FALSE(classify_case({30, 10, 0}));
  }

  TEST_CASE("case ratio validation") {
    CHECK_THROWS_AS(EncounterCase::case2(1.0), InvalidRatioError);
    CHECK_THROWS_AS(EncounterCase::case2(3.0), InvalidRatioError);
    CHECK_THROWS_AS(EncounterCase::case4(0.5), InvalidRatioError);
    CHECK_NOTHROW(EncounterCase::case4(7.0));
  }

  TEST_CASE("relative speed per case") {
    CHECK(case_relative_speed(EncounterCase::case1(), 10) == 0.0);
    CHECK(case_relative_speed(EncounterCase::case3(), 10) == doctest::Approx(20.0));
    CHECK(case_relative_speed(EncounterCase::case2(1.5), 10) == doctest::Approx(5.0));
    CHECK(case_relative_speed(EncounterCase::case4(2.0), 10) == doctest::Approx(30.0));
  }

  TEST_CASE("general expected relative speed against frozen oracles") {
    const auto u = AngleDistribution::uniform();
    CHECK(expected_relative_speed_general(SpeedDistribution::uniform(0, 20), u) ==
          doctest::Approx(14.497808259892716).epsilon(1e-6));
    CHECK(expected_relative_speed_general(SpeedDistribution::uniform(5, 30), u) ==
          doctest::Approx(24.109881756243716).epsilon(1e-6));
    CHECK(expected_relative_speed_general(SpeedDistribution::uniform(0, 20),
                                          AngleDistribution::point(0.0)) ==
          doctest::Approx(20.0 / 3.0).epsilon(1e-6));
    CHECK(expected_relative_speed_general(SpeedDistribution::around(10.0), u) ==
          doctest::Approx(40.0 / kPi).epsilon(1e-5));
    CHECK(expected_relative_speed_general(SpeedDistribution::around(10.0),
                                          AngleDistribution::point(0.0)) ==
          doctest::Approx(0.0).epsilon(1e-5));
  }

  TEST_CASE("custom speed density") {
    // triangular density on [0, 2] peaking at 2: f(v) = v/2
    auto sd = SpeedDistribution::custom(0.0, 2.0, [](double v) { return v / 2.0; });
    CHECK(sd.mean() == doctest::Approx(4.0 / 3.0).epsilon(1e-6));
    CHECK(sd.quantile(0.25) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK_THROWS(SpeedDistribution::custom(0.0, 2.0, [](double) { return 1.0; }));
  }

  TEST_CASE("per-case expected relative speed") {
    const auto sd = SpeedDistribution::uniform(0, 20);
    CHECK(expected_relative_speed_case(EncounterCase::case3(), sd, CaseMode::Literal) ==
          doctest::Approx(20.0));
    CHECK(expected_relative_speed_case(EncounterCase::case3(), sd, CaseMode::Consistent) ==
          doctest::Approx(20.0));
    CHECK(expected_relative_speed_case(EncounterCase::case1(), sd, CaseMode::Literal) ==
          doctest::Approx(1.0));
    CHECK(expected_relative_speed_case(EncounterCase::case1(), sd, CaseMode::Consistent) ==
          0.0);
    CHECK(expected_relative_speed_case(EncounterCase::case2(2.0), sd) == doctest::Approx(10.0));
    CHECK(expected_relative_speed_case(EncounterCase::case4(2.0), sd) == doctest::Approx(30.0));
    CHECK(parse_case_mode("literal") == CaseMode::Literal);
    CHECK_THROWS(parse_case_mode("other"));
  }

  TEST_CASE("availability density") {
    CHECK(availability_density(0.0, 1.0, 1.0) == doctest::Approx(1.0));
    CHECK(availability_density(200.0, 100.0, 2.0) == doctest::Approx(0.0018394).epsilon(1e-4));
    CHECK_THROWS_AS(availability_density(-1.0, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(availability_density(1.0, 0.0, 1.0), std::domain_error);
    AvailabilityParams p{150, 300, {60, 20, 10, 5}};
    CHECK(availability_pdf(0.0, p, 2) == doctest::Approx(1.0 / 3000.0));
    CHECK_THROWS_AS(availability_pdf(0.0, p, 5), std::out_of_range);
    AvailabilityParams bad{150, 300, {5, 20, 10, 60}};
    CHECK_THROWS(availability_pdf(0.0, bad, 1));
  }

  TEST_CASE("availability probability is the tail of the density") {
    AvailabilityParams p{150, 300, {60, 20, 10, 5}};
    CHECK(availability_probability(0.0, p, 3) == doctest::Approx(1.0));
    const double e = 25.0;
    const double head = vanet::integrate([&](double x) { return availability_pdf(x, p, 2); },
                                         0.0, e, vanet::QuadratureSpec{});
    CHECK(availability_probability(e, p, 2) == doctest::Approx(1.0 - head).epsilon(1e-9));
  }

  TEST_CASE("availability curve") {
    AvailabilityParams p{100, 300, {60, 20, 10, 5}};
    auto one = availability_curve({0.0}, p, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].density == doctest::Approx(1.0 / 6000.0));
    auto two = availability_curve({10.0, 50.0}, p, 3);
    CHECK(two[1].density < two[0].density);
    CHECK_THROWS(availability_curve({5.0, 5.0}, p, 1));
  }

  TEST_CASE("crossover of two separations") {
    const double e = crossover_point(150, 300, 10);
    CHECK(availability_density(e, 150, 10) == doctest::Approx(availability_density(e, 300, 10)));
    CHECK(availability_density(2 * e, 300, 10) > availability_density(2 * e, 150, 10));
    CHECK(availability_density(e / 2, 300, 10) < availability_density(e / 2, 150, 10));
    CHECK_THROWS(crossover_point(300, 150, 10));
  }

  TEST_CASE("monte carlo estimator") {
    const auto u = AngleDistribution::uniform();
    auto a = monte_carlo_expected_speed(SpeedDistribution::uniform(0, 20), u, 1'000'000, 1);
    CHECK(std::fabs(a.estimate - 14.497808259892716) < 3.0 * a.standard_error);
    auto b = monte_carlo_expected_speed(SpeedDistribution::uniform(0, 20), u, 1'000'000, 1);
    CHECK(a.estimate == b.estimate);
    CHECK(a.standard_error == b.standard_error);
    auto head_on = monte_carlo_expected_speed(SpeedDistribution::around(10.0, 1e-9),
                                              AngleDistribution::point(kPi), 1000, 3);
    CHECK(head_on.estimate == doctest::Approx(20.0).epsilon(1e-8));
    CHECK_THROWS(monte_carlo_expected_speed(SpeedDistribution::uniform(0, 1), u, 10, 1));
  }
}
