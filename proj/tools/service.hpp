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

#pragma once

// HTTP service: patient storage, recommendations and what-if queries over a
// shared knowledge base.

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "chf/model.hpp"
#include "chf/solver.hpp"

namespace httplib {
class Server;
}

namespace chf::service {

/// Directory of per-patient documents plus an index of timestamps. Every
/// write goes to a temporary file that is then renamed over the target, so
/// readers see either the old or the new document.
class PatientStore {
 public:
  struct Entry {
    std::string id;
    std::string document;  // exactly as submitted
    std::string created_at;
    std::string updated_at;
  };

  explicit PatientStore(std::filesystem::path dir);

  Entry create(const std::string& document);
  std::optional<Entry> get(const std::string& id) const;
  // nullopt when the id is unknown.
  std::optional<Entry> replace(const std::string& id, const std::string& document);

 private:
  struct Times {
    std::string created_at;
    std::string updated_at;
  };

  std::filesystem::path document_path(const std::string& id) const;
  std::mutex& lock_for(const std::string& id);
  void write_index();  // caller holds index_mutex_

  std::filesystem::path dir_;
  mutable std::mutex index_mutex_;
  std::unordered_map<std::string, Times> index_;
  std::mutex locks_mutex_;
  std::unordered_map<std::string, std::unique_ptr<std::mutex>> locks_;
};

struct Config {
  std::filesystem::path data_dir = "chf-data";
  std::vector<std::filesystem::path> kb_paths;
  std::string host = "127.0.0.1";
  int port = 8080;  // 0: any free port
  std::size_t default_limit = 10;
  SolveOptions engine;
};

class Service {
 public:
  explicit Service(Config config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Re-reads the KB files; the previous KB stays active if loading fails.
  std::size_t reload_kb();

  // Binds the configured address. Returns the bound port.
  int bind();
  // Serves on the calling thread until stop().
  void serve();
  /// bind() and serve() on a background thread. Returns the bound port.
  int start();
  void stop();

 private:
  std::shared_ptr<const Program> kb() const;
  void routes();

  Config config_;
  PatientStore store_;
  mutable std::mutex kb_mutex_;
  std::shared_ptr<const Program> kb_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace chf::service
