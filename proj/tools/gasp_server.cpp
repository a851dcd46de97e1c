#include <CLI11.hpp>
#include <httplib.h>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gasp/service/http.hpp"

namespace {

httplib::Server* running = nullptr;

void stop(int) {
  if (running) running->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Advisory console backend", "gasp-server"};
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string kb_path;
  std::string persist;
  std::string origin = "*";
  app.add_option("--host", host, "Listen address");
  app.add_option("--port", port, "Listen port")->check(CLI::Range(0, 65535));
  app.add_option("--kb", kb_path, "Knowledge base (default: built-in)")->check(CLI::ExistingFile);
  app.add_option("--persist", persist, "JSON-lines file for session persistence");
  app.add_option("--cors-origin", origin, "Allowed console origin");
  CLI11_PARSE(app, argc, argv);

  try {
    gasp::Program kb = gasp::advisor::kb_rules();
    if (!kb_path.empty()) {
      std::ifstream in(kb_path);
      std::stringstream ss;
      ss << in.rdbuf();
      kb = gasp::parse_program(ss.str());
    }
    gasp::service::ServiceOptions options;
    if (!persist.empty()) options.persistence = persist;
    gasp::service::AdvisoryService service(std::move(kb), options);

    httplib::Server server;
    gasp::service::bind(server, service, origin);
    running = &server;
    std::signal(SIGINT, stop);
    std::signal(SIGTERM, stop);
    std::cerr << "listening on " << host << ":" << port << "\n";
    if (!server.listen(host, port)) {
      std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
      return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
