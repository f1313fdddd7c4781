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

#include "service.hpp"

#include <httplib.h>
#include <json.hpp>

#include <charconv>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>

#include "chf/abduction.hpp"
#include "chf/errors.hpp"
#include "chf/kb.hpp"
#include "chf/parser.hpp"
#include "wire.hpp"

namespace chf::service {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string now_utc() {
  using namespace std::chrono;
  auto now = system_clock::now();
  std::time_t t = system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  auto ms = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;
  char out[40];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

std::string new_id() {
  static std::mutex m;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(m);
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng()),
                static_cast<unsigned long long>(rng()));
  return buf;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomically(const fs::path& path, const std::string& bytes) {
  fs::path tmp = path;
  tmp += ".tmp-" + new_id();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << bytes;
    out.flush();
    if (!out) throw Error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void fail(httplib::Response& res, int status, const std::string& message) {
  reply(res, status, {{"error", message}});
}

void invalid(httplib::Response& res, const std::vector<kb::FieldIssue>& issues) {
  json fields = json::array();
  for (const auto& i : issues) fields.push_back({{"field", i.field}, {"message", i.message}});
  reply(res, 422, {{"error", "validation failed"}, {"fields", fields}});
}

void stamp(httplib::Response& res, const PatientStore::Entry& e) {
  res.set_header("X-Created-At", e.created_at);
  res.set_header("X-Updated-At", e.updated_at);
}

json summary(const PatientStore::Entry& e) {
  return {{"id", e.id}, {"createdAt", e.created_at}, {"updatedAt", e.updated_at}};
}

// limit query parameter; nullopt when present but not a non-negative integer.
std::optional<std::size_t> limit_param(const httplib::Request& req, std::size_t fallback) {
  if (!req.has_param("limit")) return fallback;
  std::string text = req.get_param_value("limit");
  std::size_t v = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) return std::nullopt;
  return v;
}

}  // namespace

PatientStore::PatientStore(fs::path dir) : dir_(std::move(dir)) {
  fs::create_directories(dir_ / "patients");
  fs::path index = dir_ / "index.json";
  if (!fs::exists(index)) return;
  json j = json::parse(read_file(index));
  for (const auto& [id, times] : j.items()) {
    index_[id] = {times.at("createdAt").get<std::string>(),
                  times.at("updatedAt").get<std::string>()};
  }
}

fs::path PatientStore::document_path(const std::string& id) const {
  return dir_ / "patients" / (id + ".json");
}

std::mutex& PatientStore::lock_for(const std::string& id) {
  std::lock_guard lock(locks_mutex_);
  auto& slot = locks_[id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

void PatientStore::write_index() {
  json j = json::object();
  for (const auto& [id, t] : index_) j[id] = {{"createdAt", t.created_at}, {"updatedAt", t.updated_at}};
  write_atomically(dir_ / "index.json", j.dump(2));
}

PatientStore::Entry PatientStore::create(const std::string& document) {
  std::string id = new_id();
  std::lock_guard guard(lock_for(id));
  write_atomically(document_path(id), document);
  std::string now = now_utc();
  std::lock_guard lock(index_mutex_);
  index_[id] = {now, now};
  write_index();
  return {id, document, now, now};
}

std::optional<PatientStore::Entry> PatientStore::get(const std::string& id) const {
  Times times;
  {
    std::lock_guard lock(index_mutex_);
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    times = it->second;
  }
  return Entry{id, read_file(document_path(id)), times.created_at, times.updated_at};
}

std::optional<PatientStore::Entry> PatientStore::replace(const std::string& id,
                                                         const std::string& document) {
  {
    std::lock_guard lock(index_mutex_);
    if (!index_.contains(id)) return std::nullopt;
  }
  std::lock_guard guard(lock_for(id));
  write_atomically(document_path(id), document);
  std::string now = now_utc();
  std::lock_guard lock(index_mutex_);
  Times& t = index_.at(id);
  t.updated_at = now;
  write_index();
  return Entry{id, document, t.created_at, t.updated_at};
}

Service::Service(Config config)
    : config_(std::move(config)),
      store_(config_.data_dir),
      server_(std::make_unique<httplib::Server>()) {
  reload_kb();
  routes();
}

Service::~Service() { stop(); }

std::size_t Service::reload_kb() {
  auto fresh = std::make_shared<const Program>(kb::load_kb(config_.kb_paths));
  std::lock_guard lock(kb_mutex_);
  kb_ = fresh;
  return fresh->rules.size();
}

std::shared_ptr<const Program> Service::kb() const {
  std::lock_guard lock(kb_mutex_);
  return kb_;
}

int Service::bind() {
  int port = config_.port;
  if (port == 0) {
    port = server_->bind_to_any_port(config_.host);
    if (port < 0) throw Error("cannot bind " + config_.host);
  } else if (!server_->bind_to_port(config_.host, port)) {
    throw Error("cannot bind " + config_.host + ":" + std::to_string(port));
  }
  return port;
}

void Service::serve() { server_->listen_after_bind(); }

int Service::start() {
  int port = bind();
  thread_ = std::thread([this] { serve(); });
  server_->wait_until_ready();
  return port;
}

void Service::stop() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

void Service::routes() {
  httplib::Server& s = *server_;
  const std::string id_path = "/patients/([0-9a-f]{32})";

  s.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      fail(res, 500, e.what());
    } catch (...) {
      fail(res, 500, "internal error");
    }
  });

  s.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    reply(res, 200, {{"status", "ok"}});
  });

  s.Get("/kb/vocabulary", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(kb::vocabulary_json(), "application/json");
  });

  s.Post("/kb/reload", [this](const httplib::Request&, httplib::Response& res) {
    try {
      reply(res, 200, {{"rules", reload_kb()}});
    } catch (const Error& e) {
      fail(res, 500, e.what());
    }
  });

  s.Post("/patients", [this](const httplib::Request& req, httplib::Response& res) {
    if (auto issues = kb::check_patient_json(req.body); !issues.empty()) return invalid(res, issues);
    PatientStore::Entry e = store_.create(req.body);
    stamp(res, e);
    reply(res, 201, summary(e));
  });

  s.Get(id_path, [this](const httplib::Request& req, httplib::Response& res) {
    auto e = store_.get(req.matches[1]);
    if (!e) return fail(res, 404, "unknown patient");
    stamp(res, *e);
    res.set_content(e->document, "application/json");
  });

  s.Put(id_path, [this](const httplib::Request& req, httplib::Response& res) {
    if (auto issues = kb::check_patient_json(req.body); !issues.empty()) return invalid(res, issues);
    auto e = store_.replace(req.matches[1], req.body);
    if (!e) return fail(res, 404, "unknown patient");
    stamp(res, *e);
    reply(res, 200, summary(*e));
  });

  s.Get(id_path + "/recommendations", [this](const httplib::Request& req, httplib::Response& res) {
    auto limit = limit_param(req, config_.default_limit);
    if (!limit) return fail(res, 400, "limit must be a non-negative integer");
    auto e = store_.get(req.matches[1]);
    if (!e) return fail(res, 404, "unknown patient");
    kb::PatientRecord record = kb::patient_from_json(e->document);
    json out = json::array();
    for (const auto& r : kb::recommend(record, *kb(), *limit, config_.engine)) {
      out.push_back(wire::recommendation(r));
    }
    reply(res, 200, out);
  });

  s.Post(id_path + "/whatif", [this](const httplib::Request& req, httplib::Response& res) {
    auto limit = limit_param(req, config_.default_limit);
    if (!limit) return fail(res, 400, "limit must be a non-negative integer");
    auto e = store_.get(req.matches[1]);
    if (!e) return fail(res, 404, "unknown patient");

    json body = json::parse(req.body, nullptr, false);
    std::vector<kb::FieldIssue> issues;
    if (!body.is_object()) {
      issues.push_back({"", "body must be a JSON object with treatment and class"});
      return invalid(res, issues);
    }
    const kb::Vocabulary& v = kb::vocabulary();
    auto field = [&](const char* key, auto known, const char* what) -> std::string {
      auto it = body.find(key);
      if (it == body.end() || !it->is_string()) {
        issues.push_back({key, std::string("missing ") + what});
        return {};
      }
      std::string value = it->get<std::string>();
      if (!(v.*known)(value)) issues.push_back({key, "unknown " + std::string(what) + " '" + value + "'"});
      return value;
    };
    std::string treatment = field("treatment", &kb::Vocabulary::is_treatment, "treatment");
    std::string cls = field("class", &kb::Vocabulary::is_class_label, "class label");
    if (!issues.empty()) return invalid(res, issues);

    Program p = *kb();
    for (auto& f : kb::patient_to_facts(kb::patient_from_json(e->document))) {
      p.rules.push_back(std::move(f));
    }
    if (p.abducibles.empty()) {
      for (const auto& sig : kb::default_abducibles()) p.add_abducible(sig);
    }
    Query q = parse_query("recommendation(" + treatment + ", " + cls + ").");
    json out = json::array();
    for (const auto& r : abduce(p, q, *limit, config_.engine)) out.push_back(wire::whatif(r));
    reply(res, 200, out);
  });
}

}  // namespace chf::service
