// gdm: batch runs over session documents, ad-hoc text scoring and the
// session service.
//
// Exit codes: 0 success, 1 runtime/service failure, 2 schema or input
// errors, 3 incomplete panel.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "httplib.h"

#include "gdm/document.hpp"
#include "gdm/error.hpp"
#include "gdm/pipeline.hpp"
#include "gdm/report.hpp"
#include "gdm/service.hpp"
#include "gdm/store.hpp"

#ifndef GDM_VERSION
#define GDM_VERSION "0.0.0"
#endif

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitInput = 2;
constexpr int kExitPanel = 3;

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

int fail(int code, const std::string& msg) {
  std::cerr << "gdm: " << msg << '\n';
  return code;
}

std::optional<gdm::affect::AffectWeights> parse_affect(const std::string& mode) {
  if (mode.empty()) return std::nullopt;
  if (mode == "sentiment-only") return gdm::affect::AffectWeights::sentiment_only();
  return gdm::affect::AffectWeights::fused();
}

int cmd_run(const std::string& data, const std::string& session_path, const std::string& out_path,
            const std::string& fis_pref, const std::string& fis_feedback, const std::string& affect,
            const std::string& format) {
  std::optional<gdm::pipeline::Engine> engine;
  try {
    engine = gdm::pipeline::Engine::load(data, fis_pref, fis_feedback);
  } catch (const gdm::Error& e) {
    return fail(kExitInput, std::string("configuration: ") + e.what());
  }
  gdm::session::Session s;
  try {
    s = gdm::document::load_session(session_path);
  } catch (const gdm::Error& e) {
    return fail(kExitInput, session_path + ": " + e.what());
  }
  gdm::report::Json report;
  try {
    report = gdm::report::run(*engine, s, parse_affect(affect));
  } catch (const gdm::Error& e) {
    if (e.kind() == gdm::ErrorKind::Precondition) return fail(kExitPanel, e.what());
    if (e.kind() == gdm::ErrorKind::Validation || e.kind() == gdm::ErrorKind::Schema) {
      return fail(kExitInput, session_path + ": " + e.what());
    }
    return fail(kExitRuntime, e.what());
  }
  const std::string text = format == "table" ? gdm::report::render_table(report) : gdm::report::serialize(report);
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return 0;
  }
  try {
    gdm::document::write_file_atomically(out_path, text);
  } catch (const gdm::Error& e) {
    return fail(kExitRuntime, e.what());
  }
  return 0;
}

int cmd_score(const std::string& data, const std::string& text, double alpha, double beta, bool json) {
  std::optional<gdm::affect::AffectAnalyzer> analyzer;
  try {
    analyzer = gdm::affect::AffectAnalyzer::from_directory(data);
  } catch (const gdm::Error& e) {
    return fail(kExitInput, std::string("lexicon: ") + e.what());
  }
  gdm::affect::AffectScore sc;
  try {
    sc = analyzer->score(text, {alpha, beta});
  } catch (const gdm::Error& e) {
    return fail(kExitInput, e.what());
  }
  const auto ev = analyzer->emotions(text);
  if (json) {
    gdm::pipeline::MessageAffect ma{"", "", ev, sc};
    auto j = gdm::document::affect_to_json(ma);
    j.erase("participant");
    j.erase("alternative");
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  std::printf("S   %.4f\n", sc.sentiment);
  std::printf("emotions  happy %.4f  surprise %.4f  angry %.4f  sad %.4f  fear %.4f\n", ev.happy, ev.surprise,
              ev.angry, ev.sad, ev.fear);
  std::printf("E   %.4f\n", sc.emotion);
  std::printf("SP  %.4f  (alpha %.2f, beta %.2f)\n", sc.preference, sc.alpha, sc.beta);
  return 0;
}

int cmd_serve(const std::string& data, const std::string& addr, const std::string& store_dir,
              const std::string& fis_pref, const std::string& fis_feedback) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos) return fail(kExitRuntime, "--addr must be host:port");
  const std::string host = addr.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(addr.substr(colon + 1));
  } catch (const std::exception&) {
    return fail(kExitRuntime, "--addr must be host:port");
  }

  std::optional<gdm::pipeline::Engine> engine;
  std::optional<gdm::store::SessionStore> store;
  try {
    engine = gdm::pipeline::Engine::load(data, fis_pref, fis_feedback);
    store.emplace(store_dir);
  } catch (const gdm::Error& e) {
    return fail(kExitRuntime, e.what());
  }

  httplib::Server server;
  // httplib also sets SO_REUSEPORT by default, which would let a second
  // server share a busy port instead of failing.
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  });
  gdm::service::Service service(*store, *engine);
  service.install(server);
  if (port == 0) {
    port = server.bind_to_any_port(host);
    if (port < 0) return fail(kExitRuntime, "cannot bind " + host);
  } else if (!server.bind_to_port(host, port)) {
    return fail(kExitRuntime, "cannot listen on " + addr + " (address in use?)");
  }
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  // Every commit is written before its response is sent, so stopping the
  // listener once in-flight requests finish leaves nothing unflushed.
  std::thread watcher([&] {
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(50));
    server.stop();
  });
  std::cout << "listening on " << host << ':' << port << std::endl;
  server.listen_after_bind();
  g_stop = true;
  watcher.join();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fuzzy group decision-making engine"};
  app.set_version_flag("--version", std::string("gdm ") + GDM_VERSION);
  app.require_subcommand(1);
  std::string data = GDM_DEFAULT_DATA_DIR;
  app.add_option("--data-dir", data, "lexicons and rule-base configurations")->check(CLI::ExistingDirectory);

  std::string session_path, out_path, fis_pref, fis_feedback, affect, format = "json";
  auto* run = app.add_subcommand("run", "replay a session document through every step");
  run->add_option("--session", session_path, "session document")->required();
  run->add_option("--out", out_path, "report path ('-' for stdout)");
  run->add_option("--fis-pref,--fis-config", fis_pref, "preference rule base override");
  run->add_option("--fis-feedback", fis_feedback, "feedback rule base override");
  run->add_option("--affect", affect, "affect weighting")->check(CLI::IsMember({"sentiment-only", "fused"}));
  run->add_option("--format", format, "report format")->check(CLI::IsMember({"json", "table"}));

  std::string text;
  double alpha = 0.6, beta = 0.4;
  bool json = false;
  auto* score = app.add_subcommand("score", "score one text");
  score->add_option("--text", text, "text to score")->required();
  score->add_option("--alpha", alpha, "sentiment weight");
  score->add_option("--beta", beta, "emotion weight");
  score->add_flag("--json", json, "print JSON");

  std::string addr = "127.0.0.1:8080", store_dir = "sessions";
  auto* serve = app.add_subcommand("serve", "run the session service");
  serve->add_option("--addr", addr, "host:port (port 0 picks a free port)");
  serve->add_option("--data", store_dir, "session directory");
  serve->add_option("--fis-pref", fis_pref, "preference rule base override");
  serve->add_option("--fis-feedback", fis_feedback, "feedback rule base override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  if (*run) return cmd_run(data, session_path, out_path, fis_pref, fis_feedback, affect, format);
  if (*score) return cmd_score(data, text, alpha, beta, json);
  return cmd_serve(data, addr, store_dir, fis_pref, fis_feedback);
}
