#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "gdm/session.hpp"

namespace gdm::store {

/// Directory of session documents, one `<id>.session.json` per session.
///
/// Mutations of one session are serialized and each commit is a whole-file
/// atomic replace, so a crash leaves either the old or the new document.
/// Readers get immutable snapshots and never wait for a write in progress.
class SessionStore {
 public:
  /// Creates the directory if needed, checks that it is writable and loads
  /// every session document in it. Throws Io or Schema.
  explicit SessionStore(std::string dir);

  const std::string& directory() const noexcept { return dir_; }

  /// Creates and persists a new session; returns its generated id.
  std::string create(session::Setup setup);

  /// Throws NotFound for unknown ids.
  std::shared_ptr<const session::Session> get(const std::string& id) const;

  /// Applies `fn` to a copy of the session and commits the copy only if
  /// `fn` returns normally and the write succeeds.
  std::shared_ptr<const session::Session> update(const std::string& id,
                                                 const std::function<void(session::Session&)>& fn);

  std::vector<std::string> ids() const;

  std::string path_for(const std::string& id) const;

 private:
  struct Entry {
    std::mutex write;
    mutable std::shared_mutex read;
    std::shared_ptr<const session::Session> snapshot;
  };

  std::shared_ptr<Entry> entry(const std::string& id) const;
  void persist(const session::Session& s) const;

  std::string dir_;
  mutable std::mutex map_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
};

}  // namespace gdm::store
