#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "gdm/document.hpp"
#include "gdm/pipeline.hpp"
#include "gdm/session.hpp"

namespace gdm::test {

inline std::string data_dir() { return GDM_TEST_DATA_DIR; }
inline std::string fixture_dir() { return GDM_TEST_FIXTURE_DIR; }
inline std::string restaurant_path() { return data_dir() + "/restaurant.session"; }

/// Loaded once per binary; the engine is immutable.
inline const pipeline::Engine& engine() {
  static const pipeline::Engine e = pipeline::Engine::load(data_dir());
  return e;
}

inline session::Session restaurant() { return document::load_session(restaurant_path()); }

/// Setup data of the restaurant fixture, as a client would send it.
inline session::Setup restaurant_setup() {
  const auto r = restaurant();
  return {r.features, r.alternatives, r.participants, r.affect, r.thresholds};
}

/// Replays the fixture's intake through the phase protocol of `s`, which must
/// be a fresh session created from restaurant_setup(). Leaves it in Feedback
/// with every feedback entry submitted.
inline void replay_restaurant(session::Session& s, const pipeline::Engine& e) {
  using session::Phase;
  const auto r = restaurant();
  session::transition(s, Phase::Voting);
  for (const auto& a : r.assessments) {
    std::map<std::string, int> z;
    for (std::size_t k = 0; k < r.features.size(); ++k) z[r.features[k].id] = a.values[k];
    session::submit_assessment(s, a.participant, z);
  }
  session::transition(s, Phase::Discussion);
  for (auto m : r.messages) {
    m.timestamp = "2026-01-01T00:00:00.000Z";
    session::post_message(s, m);
  }
  session::transition(s, Phase::Ranking);
  session::compute_ranking(s, e);
  session::transition(s, Phase::Feedback);
  for (const auto& f : r.feedback) session::submit_feedback(s, e, f.participant, f.agreement, f.confidence);
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> n{0};
    path_ = std::filesystem::temp_directory_path() /
            ("gdm-test-" + std::to_string(::getpid()) + "-" + std::to_string(n++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string str() const { return path_.string(); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace gdm::test
