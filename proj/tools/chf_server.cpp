// Copyright 2026 The CHF Advisor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <csignal>
#include <iostream>

#include "service.hpp"

namespace {
chf::service::Service* active = nullptr;
}

int main(int argc, char** argv) {
  chf::service::Config config;
  std::vector<std::string> kb;
  CLI::App app{"HTTP service for patient records and treatment recommendations", "chf-server"};
  app.add_option("--kb", kb, "Knowledge base file or directory of .lp files")->required();
  app.add_option("--data-dir", config.data_dir, "Patient store directory")->capture_default_str();
  app.add_option("--host", config.host, "Address to bind")->capture_default_str();
  app.add_option("--port", config.port, "Port (0 picks a free one)")->capture_default_str();
  app.add_option("--limit", config.default_limit, "Default answer limit")->capture_default_str();
  app.add_option("--step-budget", config.engine.step_budget, "Resolution steps per query")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  config.kb_paths.assign(kb.begin(), kb.end());

  try {
    chf::service::Service service(config);
    active = &service;
    std::signal(SIGINT, [](int) { active->stop(); });
    std::signal(SIGTERM, [](int) { active->stop(); });
    int port = service.bind();
    std::cout << "listening on " << config.host << ":" << port << std::endl;
    service.serve();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
