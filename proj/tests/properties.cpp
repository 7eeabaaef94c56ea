// Randomized property suites. Seeds are fixed so failures reproduce; pass
// --seed-offset=N (doctest ignores unknown flags) to explore other draws.

#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>

#include "gdm/consensus.hpp"
#include "gdm/document.hpp"
#include "gdm/error.hpp"
#include "gdm/fuzzy.hpp"
#include "gdm/preference.hpp"
#include "gdm/service.hpp"
#include "gdm/session.hpp"
#include "gdm/store.hpp"
#include "support.hpp"

namespace {

std::uint64_t g_seed_offset = 0;

std::mt19937_64 rng_for(std::uint64_t salt) { return std::mt19937_64(0x5eed0000u + salt + g_seed_offset); }

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<>(lo, hi)(rng); }
int pick(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<>(lo, hi)(rng); }

}  // namespace

TEST_SUITE("membership") {
  TEST_CASE("1000 random trapezoids are bounded, piecewise linear and continuous") {
    auto rng = rng_for(1);
    for (int n = 0; n < 1000; ++n) {
      std::array<double, 4> p;
      for (auto& v : p) v = uniform(rng, -50, 50);
      std::sort(p.begin(), p.end());
      // Force some degenerate shapes.
      if (n % 7 == 0) p[1] = p[0];
      if (n % 11 == 0) p[3] = p[2];
      if (n % 13 == 0) p[2] = p[1];
      const gdm::fuzzy::TrapezoidMF mf(p[0], p[1], p[2], p[3]);
      const auto [a, b, c, d] = p;

      for (int k = 0; k < 50; ++k) {
        const double x = uniform(rng, -60, 60);
        const double mu = mf(x);
        REQUIRE(mu >= 0.0);
        REQUIRE(mu <= 1.0);
        if (x < a || x > d) REQUIRE(mu == 0.0);
        if (x >= b && x <= c) REQUIRE(mu == 1.0);
      }
      // Linear on each edge: the midpoint of a chord lies on the graph.
      if (b > a) {
        const double x0 = uniform(rng, a, b), x1 = uniform(rng, a, b);
        REQUIRE(mf(0.5 * (x0 + x1)) == doctest::Approx(0.5 * (mf(x0) + mf(x1))).epsilon(1e-9));
        REQUIRE(mf(a + 1e-9 * (b - a)) < 1e-6);
        REQUIRE(mf(b - 1e-9 * (b - a)) > 1 - 1e-6);
      }
      if (d > c) {
        const double x0 = uniform(rng, c, d), x1 = uniform(rng, c, d);
        REQUIRE(mf(0.5 * (x0 + x1)) == doctest::Approx(0.5 * (mf(x0) + mf(x1))).epsilon(1e-9));
        REQUIRE(mf(d - 1e-9 * (d - c)) < 1e-6);
        REQUIRE(mf(c + 1e-9 * (d - c)) > 1 - 1e-6);
      }
    }
  }
}

TEST_SUITE("preference") {
  TEST_CASE("500 random F/Z pairs: raw preference is bilinear") {
    auto rng = rng_for(2);
    for (int n = 0; n < 500; ++n) {
      const int k = pick(rng, 1, 12);
      std::vector<int> f1(k), f2(k), z1(k), z2(k);
      for (int i = 0; i < k; ++i) {
        f1[i] = pick(rng, 0, 1);
        f2[i] = pick(rng, 0, 1);
        z1[i] = pick(rng, -1, 1);
        z2[i] = pick(rng, -1, 1);
      }
      const int s = pick(rng, -3, 3), t = pick(rng, -3, 3);
      std::vector<int> zc(k), fc(k);
      for (int i = 0; i < k; ++i) {
        zc[i] = s * z1[i] + t * z2[i];
        fc[i] = s * f1[i] + t * f2[i];
      }
      using gdm::preference::raw_preference;
      REQUIRE(raw_preference(f1, zc) == s * raw_preference(f1, z1) + t * raw_preference(f1, z2));
      REQUIRE(raw_preference(fc, z1) == s * raw_preference(f1, z1) + t * raw_preference(f2, z1));
      const int r = raw_preference(f1, z1);
      REQUIRE(std::abs(r) <= k);
      REQUIRE(gdm::preference::scale_preference(r) == std::clamp(50.0 + 10.0 * r, 0.0, 100.0));
    }
  }
}

TEST_SUITE("consensus") {
  TEST_CASE("500 random vectors: IQR is translation invariant and scale equivariant") {
    auto rng = rng_for(3);
    for (int n = 0; n < 500; ++n) {
      const int m = pick(rng, 2, 40);
      std::vector<double> x(m);
      for (auto& v : x) v = uniform(rng, 0, 10);
      const double shift = uniform(rng, -100, 100);
      const double scale = uniform(rng, -5, 5);
      std::vector<double> shifted = x, scaled = x;
      for (auto& v : shifted) v += shift;
      for (auto& v : scaled) v *= scale;
      const auto q = gdm::consensus::compute_iqr(x);
      REQUIRE(q.iqr >= 0.0);
      REQUIRE(gdm::consensus::compute_iqr(shifted).iqr == doctest::Approx(q.iqr).epsilon(1e-9).scale(100));
      REQUIRE(gdm::consensus::compute_iqr(scaled).iqr == doctest::Approx(std::abs(scale) * q.iqr).epsilon(1e-9).scale(10));
      // Permutation does not matter.
      std::shuffle(x.begin(), x.end(), rng);
      REQUIRE(gdm::consensus::compute_iqr(x) == q);
    }
  }
}

TEST_SUITE("phase machine") {
  namespace s = gdm::session;

  // One random intake request against a session; may legitimately fail.
  void random_request(std::mt19937_64& rng, s::Session& x, const gdm::pipeline::Engine& e) {
    static const char* participants[] = {"partp1", "partp2", "partp3", "partp4", "partp5", "late", "ghost"};
    static const char* alternatives[] = {"alter1", "alter2", "alter3", "alter4", "nowhere"};
    static const char* texts[] = {"The place is nice.", "awful service", "", "meh", "I love it!"};
    std::string p = participants[pick(rng, 0, 6)];
    // Half the time send what the phase expects, otherwise anything at all.
    int op = pick(rng, 0, 7);
    if (pick(rng, 0, 1) == 0) {
      switch (x.phase) {
        case s::Phase::Voting:
          op = 0;
          for (const auto& q : x.participants) {
            if (std::none_of(x.assessments.begin(), x.assessments.end(),
                             [&](const auto& a) { return a.participant == q.id; })) {
              op = 3;
              p = q.id;
              break;
            }
          }
          break;
        case s::Phase::Discussion: op = pick(rng, 0, 1) ? 4 : 0; break;
        case s::Phase::Ranking: op = x.ranking ? 0 : 5; break;
        case s::Phase::Feedback: op = pick(rng, 0, 2) ? 6 : (pick(rng, 0, 1) ? 7 : 0); break;
        default: break;
      }
    }
    switch (op) {
      case 0:
      case 1: {
        // Mostly a legal move so walks get deep into the protocol.
        auto target = static_cast<s::Phase>(pick(rng, 0, 5));
        if (pick(rng, 0, 3) != 0 && x.phase != s::Phase::Closed) {
          target = static_cast<s::Phase>(static_cast<int>(x.phase) + 1);
          if (x.phase == s::Phase::Feedback && pick(rng, 0, 2) == 0) target = s::Phase::Discussion;
        }
        s::transition(x, target);
        break;
      }
      case 2: s::add_participant(x, {p, "", uniform(rng, 0, 2)}); break;
      case 3: {
        std::map<std::string, int> z;
        for (const auto& f : x.features) z[f.id] = pick(rng, -1, 1);
        if (pick(rng, 0, 9) == 0) z.begin()->second = 4;
        s::submit_assessment(x, p, z);
        break;
      }
      case 4: s::post_message(x, {p, alternatives[pick(rng, 0, 4)], texts[pick(rng, 0, 4)], "t"}); break;
      case 5: s::compute_ranking(x, e); break;
      case 6: s::submit_feedback(x, e, p, uniform(rng, -1, 11), uniform(rng, 0, 10)); break;
      case 7: s::compute_consensus(x); break;
    }
  }

  void check_invariants(const s::Session& x) {
    s::check_integrity(x);
    if (x.phase < s::Phase::Ranking) REQUIRE_FALSE(x.ranking);
    if (x.phase == s::Phase::Feedback || x.phase == s::Phase::Closed) REQUIRE(x.ranking);
    if (x.phase < s::Phase::Feedback) {
      REQUIRE(x.feedback.empty());
      REQUIRE_FALSE(x.consensus);
    }
    if (x.ranking) REQUIRE(x.ranking->ranking.order.size() == x.alternatives.size());
    if (x.consensus) REQUIRE(x.consensus->scores.size() == x.feedback.size());
    for (const auto& f : x.feedback) REQUIRE(f.score);
  }

  TEST_CASE("1000 random request interleavings preserve referential integrity") {
    const auto& engine = gdm::test::engine();
    const auto base = s::create("fuzz", gdm::test::restaurant_setup());
    auto rng = rng_for(4);
    int accepted = 0, rejected = 0, with_feedback = 0, reopened = 0;
    for (int n = 0; n < 1000; ++n) {
      s::Session x = base;
      const int steps = pick(rng, 10, 150);
      for (int k = 0; k < steps; ++k) {
        const s::Session before = x;
        try {
          random_request(rng, x, engine);
          ++accepted;
          if (before.phase == s::Phase::Feedback && x.phase == s::Phase::Discussion) ++reopened;
        } catch (const gdm::Error&) {
          // A rejected request changes nothing.
          REQUIRE(x == before);
          ++rejected;
        }
        check_invariants(x);
      }
      if (!x.feedback.empty()) ++with_feedback;
      // Whatever state was reached survives a document round trip.
      REQUIRE(gdm::document::parse_session(gdm::document::serialize_session(x)) == x);
    }
    CHECK(accepted > 1000);
    CHECK(rejected > 1000);
    MESSAGE("accepted " << accepted << ", rejected " << rejected << ", ended with feedback " << with_feedback
                        << ", reopened " << reopened);
    CHECK(with_feedback > 0);
    CHECK(reopened > 0);
  }

  TEST_CASE("random interleavings through the service match what is on disk") {
    const auto& engine = gdm::test::engine();
    gdm::test::TempDir dir;
    gdm::store::SessionStore store(dir.str());
    gdm::service::Service svc(store, engine, [] { return std::string("t"); });
    auto rng = rng_for(5);
    using gdm::document::Json;
    const Json fixture = Json::parse(gdm::test::slurp(gdm::test::restaurant_path()));
    Json setup;
    for (const char* k : {"features", "alternatives", "participants"}) setup[k] = fixture[k];
    static const char* phases[] = {"setup", "voting", "discussion", "ranking", "feedback", "closed"};
    for (int n = 0; n < 20; ++n) {
      const auto created = svc.handle({"POST", "/sessions", setup.dump()});
      REQUIRE(created.status == 201);
      const std::string base = "/sessions/" + Json::parse(created.body)["id"].get<std::string>();
      for (int k = 0; k < 40; ++k) {
        const std::string p = "partp" + std::to_string(pick(rng, 1, 6));
        gdm::service::Response r;
        switch (pick(rng, 0, 5)) {
          case 0:
          case 1: r = svc.handle({"POST", base + "/phase", Json{{"target", phases[pick(rng, 0, 5)]}}.dump()}); break;
          case 2: {
            Json v;
            for (const auto& f : fixture["features"]) v[f["id"].get<std::string>()] = pick(rng, -1, 1);
            r = svc.handle({"POST", base + "/assessments", Json{{"participant", p}, {"values", v}}.dump()});
            break;
          }
          case 3:
            r = svc.handle({"POST", base + "/messages",
                            Json{{"participant", p}, {"alternative", "alter" + std::to_string(pick(rng, 1, 4))},
                                 {"text", "nice"}}
                                .dump()});
            break;
          case 4: r = svc.handle({"POST", base + "/ranking", ""}); break;
          case 5:
            r = svc.handle({"POST", base + "/feedback",
                            Json{{"participant", p}, {"agreement", pick(rng, 0, 10)}, {"confidence", pick(rng, 0, 10)}}
                                .dump()});
            break;
        }
        REQUIRE(r.status != 500);
      }
    }
    gdm::store::SessionStore reloaded(dir.str());
    REQUIRE(reloaded.ids() == store.ids());
    for (const auto& id : store.ids()) {
      check_invariants(*store.get(id));
      REQUIRE(*reloaded.get(id) == *store.get(id));
    }
  }
}

int main(int argc, char** argv) {
  doctest::Context ctx;
  for (int i = 1; i < argc; ++i) {
    if (std::strncmp(argv[i], "--seed-offset=", 14) == 0) g_seed_offset = std::stoull(argv[i] + 14);
  }
  ctx.applyCommandLine(argc, argv);
  return ctx.run();
}
