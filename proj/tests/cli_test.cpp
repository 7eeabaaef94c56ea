#include <csignal>
#include <cstdio>
#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <thread>

#include "doctest.h"
#include "httplib.h"

#include "gdm/document.hpp"
#include "support.hpp"

using gdm::document::Json;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

// Runs the CLI with stderr discarded and returns its exit code and stdout.
Result cli(const std::vector<std::string>& args) {
  std::string cmd = quote(GDM_CLI);
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " 2>/dev/null";
  Result r;
  FILE* p = ::popen(cmd.c_str(), "r");
  REQUIRE(p);
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = ::pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// A `gdm serve` child process; the port is read from its first output line.
class Server {
 public:
  explicit Server(std::vector<std::string> args) {
    int fds[2];
    REQUIRE(::pipe(fds) == 0);
    pid_ = ::fork();
    REQUIRE(pid_ >= 0);
    if (pid_ == 0) {
      ::dup2(fds[1], 1);
      ::close(fds[0]);
      const int devnull = ::open("/dev/null", O_WRONLY);
      ::dup2(devnull, 2);
      std::vector<char*> argv{const_cast<char*>(GDM_CLI)};
      for (auto& a : args) argv.push_back(a.data());
      argv.push_back(nullptr);
      ::execv(GDM_CLI, argv.data());
      ::_exit(127);
    }
    ::close(fds[1]);
    out_ = ::fdopen(fds[0], "r");
    char line[256] = {};
    if (std::fgets(line, sizeof line, out_)) {
      const std::string s = line;
      const auto colon = s.rfind(':');
      if (s.rfind("listening on ", 0) == 0 && colon != std::string::npos) port_ = std::stoi(s.substr(colon + 1));
    }
  }

  ~Server() {
    if (pid_ > 0 && !exited_) {
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, nullptr, 0);
    }
    if (out_) std::fclose(out_);
  }

  int port() const { return port_; }

  int stop(int sig = SIGTERM) {
    ::kill(pid_, sig);
    return wait();
  }

  /// Exit code, or -1 if the process is still running after ten seconds.
  int wait() {
    int status = 0;
    for (int i = 0; i < 200; ++i) {
      if (::waitpid(pid_, &status, WNOHANG) == pid_) {
        exited_ = true;
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
    return -1;
  }

 private:
  pid_t pid_ = -1;
  FILE* out_ = nullptr;
  int port_ = 0;
  bool exited_ = false;
};

std::string data_args() { return gdm::test::data_dir(); }

}  // namespace

TEST_CASE("version and usage") {
  const auto v = cli({"--version"});
  CHECK(v.code == 0);
  CHECK(v.out.find("gdm 0.1.0") != std::string::npos);
  CHECK(cli({}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"run"}).code == 2);
  CHECK(cli({"run", "--session", gdm::test::restaurant_path(), "--format", "xml"}).code == 2);
  CHECK(cli({"--data-dir", "/nonexistent", "score", "--text", "hi"}).code == 2);
}

TEST_CASE("score") {
  const auto r = cli({"--data-dir", data_args(), "score", "--text", "The place is nice."});
  CHECK(r.code == 0);
  CHECK(r.out.find("S   0.4215") != std::string::npos);

  const auto j = cli({"--data-dir", data_args(), "score", "--text", "I am so happy", "--json"});
  REQUIRE(j.code == 0);
  const Json parsed = Json::parse(j.out);
  CHECK(parsed["emotions"]["happy"] == 1.0);
  CHECK(parsed.contains("preference"));

  CHECK(cli({"score", "--text", "x", "--alpha", "0.9", "--beta", "0.9"}).code == 2);
}

TEST_CASE("run writes the report") {
  gdm::test::TempDir dir;
  const auto r = cli({"run", "--session", gdm::test::restaurant_path(), "--out", dir / "report.json"});
  CHECK(r.code == 0);
  const Json rep = Json::parse(gdm::test::slurp(dir / "report.json"));
  CHECK(rep["ranking"]["top"] == "alter2");
  CHECK(rep["consensus"]["level"] == "High");

  const auto to_stdout = cli({"run", "--session", gdm::test::restaurant_path(), "--out", "-"});
  CHECK(to_stdout.code == 0);
  CHECK(to_stdout.out == gdm::test::slurp(dir / "report.json"));

  const auto table = cli({"run", "--session", gdm::test::restaurant_path(), "--format", "table"});
  CHECK(table.code == 0);
  CHECK(table.out.find("Top ranked: alter2") != std::string::npos);
  CHECK(table.out.find("Normalized features") != std::string::npos);
}

TEST_CASE("run is deterministic and honours overrides") {
  const auto a = cli({"run", "--session", gdm::test::restaurant_path()});
  const auto b = cli({"run", "--session", gdm::test::restaurant_path(), "--fis-pref",
                      gdm::test::data_dir() + "/preference_fis.json", "--fis-feedback",
                      gdm::test::data_dir() + "/feedback_fis.json"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);

  const auto fused = cli({"run", "--session", gdm::test::restaurant_path(), "--affect", "fused"});
  CHECK(fused.code == 0);
  CHECK(fused.out != a.out);
  CHECK(Json::parse(fused.out)["affect"]["beta"] == 0.4);

  gdm::test::TempDir dir;
  gdm::test::spit(dir / "broken.json", "{\"inputs\": []}");
  CHECK(cli({"run", "--session", gdm::test::restaurant_path(), "--fis-pref", dir / "broken.json"}).code == 2);
  CHECK(cli({"run", "--session", gdm::test::restaurant_path(), "--fis-config", dir / "missing.json"}).code == 2);
}

TEST_CASE("run exit codes for bad sessions") {
  gdm::test::TempDir dir;
  CHECK(cli({"run", "--session", dir / "missing.session"}).code == 2);

  gdm::test::spit(dir / "garbled.session", "{ \"schema_version\": 1,");
  CHECK(cli({"run", "--session", dir / "garbled.session"}).code == 2);

  Json j = Json::parse(gdm::test::slurp(gdm::test::restaurant_path()));
  j["assessments"].erase(4);
  gdm::test::spit(dir / "partial.session", j.dump());
  CHECK(cli({"run", "--session", dir / "partial.session"}).code == 3);

  gdm::test::spit(dir / "report.json", "keep");
  CHECK(cli({"run", "--session", dir / "partial.session", "--out", dir / "report.json"}).code == 3);
  CHECK(gdm::test::slurp(dir / "report.json") == "keep");

  CHECK(cli({"run", "--session", gdm::test::restaurant_path(), "--out", dir / "no/such/dir/r.json"}).code == 1);
}

TEST_CASE("serve persists across restarts") {
  gdm::test::TempDir dir;
  std::string id;
  {
    Server s({"serve", "--addr", "127.0.0.1:0", "--data", dir / "sessions"});
    REQUIRE(s.port() > 0);
    httplib::Client c("127.0.0.1", s.port());
    Json j = Json::parse(gdm::test::slurp(gdm::test::restaurant_path()));
    Json body;
    for (const char* k : {"features", "alternatives", "participants"}) body[k] = j[k];
    auto res = c.Post("/sessions", body.dump(), "application/json");
    REQUIRE(res);
    REQUIRE(res->status == 201);
    id = Json::parse(res->body)["id"];
    auto ph = c.Post("/sessions/" + id + "/phase", R"({"target": "voting"})", "application/json");
    REQUIRE(ph);
    CHECK(ph->status == 200);
    CHECK(s.stop(SIGTERM) == 0);
  }
  {
    Server s({"serve", "--addr", "127.0.0.1:0", "--data", dir / "sessions"});
    REQUIRE(s.port() > 0);
    httplib::Client c("127.0.0.1", s.port());
    auto res = c.Get("/sessions/" + id);
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(Json::parse(res->body)["phase"] == "voting");
    CHECK(s.stop(SIGINT) == 0);
  }
}

TEST_CASE("serve startup failures") {
  gdm::test::TempDir dir;
  Server first({"serve", "--addr", "127.0.0.1:0", "--data", dir / "a"});
  REQUIRE(first.port() > 0);
  Server clash({"serve", "--addr", "127.0.0.1:" + std::to_string(first.port()), "--data", dir / "b"});
  CHECK(clash.port() == 0);
  CHECK(clash.wait() == 1);

  gdm::test::spit(dir / "file", "not a directory");
  Server bad_dir({"serve", "--addr", "127.0.0.1:0", "--data", dir / "file"});
  CHECK(bad_dir.port() == 0);
  CHECK(bad_dir.wait() == 1);

  Server bad_addr({"serve", "--addr", "nonsense"});
  CHECK(bad_addr.wait() == 1);
}
