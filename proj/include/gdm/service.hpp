#pragma once

#include <functional>
#include <string>

#include "gdm/error.hpp"
#include "gdm/pipeline.hpp"
#include "gdm/store.hpp"

namespace httplib {
class Server;
}

namespace gdm::service {

struct Request {
  std::string method;  ///< "GET" or "POST"
  std::string path;
  std::string body;
};

struct Response {
  int status = 200;
  std::string body;  ///< JSON
};

/// HTTP status for an error kind: 422 validation/schema, 409 phase,
/// duplicate and precondition conflicts, 404 unknown ids, 500 otherwise.
int status_for(ErrorKind kind) noexcept;

/// The session API, independent of any transport. `handle` is what the HTTP
/// server calls for every request; tests may call it directly.
class Service {
 public:
  using Clock = std::function<std::string()>;

  Service(store::SessionStore& store, const pipeline::Engine& engine, Clock clock = {});

  Response handle(const Request& req);

  /// Routes every request on `server` through handle().
  void install(httplib::Server& server);

 private:
  store::SessionStore& store_;
  const pipeline::Engine& engine_;
  Clock clock_;
};

/// UTC time as "YYYY-MM-DDThh:mm:ss.mmmZ".
std::string utc_timestamp();

}  // namespace gdm::service
