#include <iostream>

#include <CLI11.hpp>
#include <httplib.h>

#include "kinetutor/domain.hpp"
#include "kinetutor/service.hpp"

int main(int argc, char** argv) {
  CLI::App app{"HTTP session API for the kinematics tutor"};
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string origin = "*";
  std::string static_dir;
  app.add_option("--host", host)->capture_default_str();
  app.add_option("--port", port)->check(CLI::Range(1, 65535))->capture_default_str();
  app.add_option("--cors-origin", origin, "value for Access-Control-Allow-Origin")->capture_default_str();
  app.add_option("--static", static_dir, "serve a built web client from this directory")->check(CLI::ExistingDirectory);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  kinetutor::TutorService service(kinetutor::Domain::kinematics(), origin);
  httplib::Server server;
  service.register_routes(server);
  if (!static_dir.empty()) server.set_mount_point("/", static_dir);

  std::cout << "listening on http://" << host << ':' << port << std::endl;
  if (!server.listen(host, port)) {
    std::cerr << "cannot listen on " << host << ':' << port << '\n';
    return 2;
  }
  return 0;
}
