#include <cmath>

#include "doctest.h"

#include "gdm/consensus.hpp"
#include "gdm/error.hpp"
#include "support.hpp"

using namespace gdm::consensus;

namespace {

double quadrature_centroid(const gdm::fuzzy::TrapezoidMF& mf) {
  const int n = 200000;
  const double h = (mf.d() - mf.a()) / n;
  double num = 0, den = 0;
  for (int i = 0; i < n; ++i) {
    const double x = mf.a() + (i + 0.5) * h;
    num += x * mf(x);
    den += mf(x);
  }
  return num / den;
}

}  // namespace

TEST_CASE("feedback scores") {
  const auto& fis = gdm::test::engine().feedback;
  CHECK(std::abs(fis.score(7, 4) - 6.4) <= 0.3);
  CHECK(std::abs(fis.score(9, 9) - 8.14) <= 0.25);
  CHECK(fis.score(9, 9) == doctest::Approx(fis.score(10, 10)).epsilon(1e-12));
  CHECK(fis.score(7, 8) == doctest::Approx(fis.score(7, 9)).epsilon(1e-12));
  CHECK(std::abs(fis.score(7, 8) - 7.95) <= 0.25);
}

TEST_CASE("strong disagreement with full confidence lands on the weak term") {
  const auto& fis = gdm::test::engine().feedback;
  const auto& rb = fis.rule_base();
  const auto act = rb.activations(std::vector<double>{0, 10});
  CHECK(act == std::vector<double>{1, 0, 0});
  const double weak = quadrature_centroid(rb.output().term("weak"));
  CHECK(fis.score(0, 10) == doctest::Approx(weak).epsilon(1e-3));
  CHECK(fis.score(0, 10) < 4);
}

TEST_CASE("feedback range") {
  const auto& fis = gdm::test::engine().feedback;
  CHECK_THROWS_WITH_AS(fis.score(11, 5), doctest::Contains("feedback out of range"), gdm::Error);
  CHECK_THROWS_AS(fis.score(5, -0.1), gdm::Error);
  CHECK_THROWS_AS(fis.score(NAN, 5), gdm::Error);
  CHECK_NOTHROW(fis.score(0, 10));
}

TEST_CASE("feedback rule base vocabulary is checked") {
  const auto pref = gdm::fuzzy::load_rule_base(gdm::test::data_dir() + "/preference_fis.json");
  CHECK_THROWS_WITH_AS(FeedbackFis{pref}, doctest::Contains("feedback rule base"), gdm::Error);
}

TEST_CASE("quartiles") {
  const auto q = compute_iqr({8.14, 8.14, 7.95, 8.14, 7.95});
  CHECK(q.q1 == 7.95);
  CHECK(q.q3 == 8.14);
  CHECK(q.iqr == doctest::Approx(0.19));

  CHECK(compute_iqr({3, 3, 3}).iqr == 0.0);

  const auto wide = compute_iqr({0, 0, 10, 10});
  CHECK(wide.q1 == 0);
  CHECK(wide.q3 == 10);
  CHECK(wide.iqr == 10);

  CHECK(quantile({1, 2, 3, 4}, 0.5) == doctest::Approx(2.5));
  CHECK(quantile({4, 1, 3, 2}, 0.0) == 1);
  CHECK(quantile({4, 1, 3, 2}, 1.0) == 4);

  CHECK_THROWS_WITH_AS(compute_iqr({5}), doctest::Contains("insufficient feedback"), gdm::Error);
  CHECK_THROWS_AS(compute_iqr({}), gdm::Error);
}

TEST_CASE("classification") {
  CHECK(classify(0.19) == Level::High);
  CHECK(classify(2.0) == Level::High);
  CHECK(classify(2.01) == Level::Medium);
  CHECK(classify(4.0) == Level::Medium);
  CHECK(classify(4.5) == Level::None);
  CHECK_THROWS_AS(classify(-0.1), gdm::Error);

  CHECK(classify(1.0, {0.5, 1.5}) == Level::Medium);
  CHECK_THROWS_AS(validate(Thresholds{3, 2}), gdm::Error);
  CHECK_THROWS_AS(validate(Thresholds{-1, 2}), gdm::Error);

  CHECK(std::string(to_string(Level::None)) == "None");
  CHECK(std::string(display_name(Level::None)) == "Low");
  CHECK(std::string(display_name(Level::High)) == "High");
  CHECK(parse_level("Medium") == Level::Medium);
  CHECK_THROWS_AS(parse_level("low-ish"), gdm::Error);
}

TEST_CASE("consensus report") {
  const auto r = consensus_report({8.14, 8.14, 7.95, 8.14, 7.95});
  CHECK(r.level == Level::High);
  CHECK_FALSE(r.note);
  CHECK(r.scores.size() == 5);

  const auto edge = consensus_report({0, 0, 2, 2});
  CHECK(edge.quartiles.iqr == 2.0);
  CHECK(edge.level == Level::High);
  CHECK(edge.note);

  const auto above = consensus_report({0, 0, 2.005, 2.005});
  CHECK(above.level == Level::Medium);
  CHECK_FALSE(above.note);

  CHECK(consensus_report({0, 10}).level == Level::None);
  CHECK(consensus_report({10, 10}).level == Level::High);
}
