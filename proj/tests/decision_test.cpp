#include <cmath>

#include "doctest.h"

#include "gdm/decision.hpp"
#include "gdm/error.hpp"
#include "support.hpp"

using namespace gdm::decision;

TEST_CASE("total preference on the calibration points") {
  const auto& fis = gdm::test::engine().preference;
  CHECK(std::abs(fis.total(62, 0.67) - 5.99) <= 0.5);
  CHECK(std::abs(fis.total(54, 0.21) - 5.0) <= 0.5);
  CHECK(std::abs(fis.total(54, 0.41) - 5.0) <= 0.5);
  CHECK(std::abs(fis.total(62, 0.54) - 5.36) <= 0.5);
  CHECK(fis.total(50, 0) == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("total preference clamps its inputs") {
  const auto& fis = gdm::test::engine().preference;
  CHECK(fis.total(130, 2) == fis.total(100, 1));
  CHECK(fis.total(-5, -3) == fis.total(0, -1));
  CHECK_THROWS_AS(fis.total(NAN, 0), gdm::Error);
}

TEST_CASE("preference rule base vocabulary is checked") {
  const auto feedback = gdm::fuzzy::load_rule_base(gdm::test::data_dir() + "/feedback_fis.json");
  CHECK_THROWS_WITH_AS(PreferenceFis{feedback}, doctest::Contains("preference rule base"), gdm::Error);
  CHECK_THROWS_AS(PreferenceFis::load("/nonexistent.json"), gdm::Error);
}

TEST_CASE("ranking") {
  const auto r = rank({"alter1", "alter2", "alter3", "alter4"}, {5, 5.99, 5, 5.36});
  REQUIRE(r.order.size() == 4);
  CHECK(r.order[0].id == "alter2");
  CHECK(r.order[1].id == "alter4");
  CHECK(r.order[2].id == "alter1");
  CHECK(r.order[3].id == "alter3");
  CHECK(r.top() == "alter2");

  const auto tied = rank({"c", "a", "b"}, {1, 1, 1});
  CHECK(tied.order[0].id == "a");
  CHECK(tied.order[1].id == "b");
  CHECK(tied.order[2].id == "c");

  CHECK(rank({"only"}, {3}).top() == "only");
  CHECK_THROWS_AS(rank({}, {}), gdm::Error);
  CHECK_THROWS_AS(rank({"a", "b"}, {1}), gdm::Error);
}

TEST_CASE("doubling the resolution moves totals by less than 1e-3") {
  const auto& rb = gdm::test::engine().preference.rule_base();
  const auto fine = rb.with_resolution(2 * rb.resolution());
  for (double v = 0; v <= 100; v += 5) {
    for (double s = -1; s <= 1.0001; s += 0.1) {
      CHECK(std::abs(rb.infer(std::vector<double>{v, s}) - fine.infer(std::vector<double>{v, s})) < 1e-3);
    }
  }
}
