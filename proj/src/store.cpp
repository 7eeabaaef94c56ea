#include "gdm/store.hpp"

#include <cstdio>
#include <filesystem>
#include <random>

#include "gdm/document.hpp"
#include "gdm/error.hpp"

namespace gdm::store {

namespace fs = std::filesystem;

namespace {

constexpr const char* kSuffix = ".session.json";

std::string random_id() {
  static std::mutex mu;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(mu);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
  return buf;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

SessionStore::SessionStore(std::string dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec || !fs::is_directory(dir_)) {
    throw Error(ErrorKind::Io, "data directory '" + dir_ + "' is not usable: " + (ec ? ec.message() : "not a directory"));
  }
  // Probe once so a read-only directory fails at startup, not on the first
  // request.
  const std::string probe = (fs::path(dir_) / ".write-probe").string();
  document::write_file_atomically(probe, "");
  fs::remove(probe, ec);

  for (const auto& de : fs::directory_iterator(dir_)) {
    const std::string name = de.path().filename().string();
    if (!de.is_regular_file() || !ends_with(name, kSuffix)) continue;
    auto s = std::make_shared<session::Session>(document::load_session(de.path().string()));
    const std::string expected = s->id + kSuffix;
    if (name != expected) {
      throw Error(ErrorKind::Schema, "'" + de.path().string() + "' holds session '" + s->id + "'");
    }
    auto e = std::make_shared<Entry>();
    e->snapshot = std::move(s);
    sessions_.emplace(name.substr(0, name.size() - std::string(kSuffix).size()), std::move(e));
  }
}

std::string SessionStore::path_for(const std::string& id) const { return (fs::path(dir_) / (id + kSuffix)).string(); }

void SessionStore::persist(const session::Session& s) const {
  document::write_file_atomically(path_for(s.id), document::serialize_session(s));
}

std::string SessionStore::create(session::Setup setup) {
  std::string id;
  {
    std::lock_guard lock(map_mutex_);
    do {
      id = random_id();
    } while (sessions_.count(id));
  }
  auto s = std::make_shared<session::Session>(session::create(id, std::move(setup)));
  persist(*s);
  auto e = std::make_shared<Entry>();
  e->snapshot = std::move(s);
  std::lock_guard lock(map_mutex_);
  sessions_.emplace(id, std::move(e));
  return id;
}

std::shared_ptr<SessionStore::Entry> SessionStore::entry(const std::string& id) const {
  std::lock_guard lock(map_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorKind::NotFound, "unknown session '" + id + "'");
  return it->second;
}

std::shared_ptr<const session::Session> SessionStore::get(const std::string& id) const {
  auto e = entry(id);
  std::shared_lock lock(e->read);
  return e->snapshot;
}

std::shared_ptr<const session::Session> SessionStore::update(const std::string& id,
                                                             const std::function<void(session::Session&)>& fn) {
  auto e = entry(id);
  std::lock_guard write_lock(e->write);
  std::shared_ptr<const session::Session> current;
  {
    std::shared_lock lock(e->read);
    current = e->snapshot;
  }
  auto next = std::make_shared<session::Session>(*current);
  fn(*next);
  persist(*next);
  std::shared_ptr<const session::Session> committed = std::move(next);
  {
    std::unique_lock lock(e->read);
    e->snapshot = committed;
  }
  return committed;
}

std::vector<std::string> SessionStore::ids() const {
  std::lock_guard lock(map_mutex_);
  std::vector<std::string> out;
  for (const auto& [id, _] : sessions_) out.push_back(id);
  return out;
}

}  // namespace gdm::store
