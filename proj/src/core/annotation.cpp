// Copyright 2026 The HazardBench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/annotation.hpp"

#include <sys/socket.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <random>
#include <regex>

#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/seeding.hpp"
#include "httplib.h"
#include "json.hpp"

namespace hb {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr const char* kPlaceholderPage =
    "<!doctype html><html><head><meta charset=\"utf-8\"><title>Annotation</title></head>"
    "<body><p>The annotation UI is not installed. Point --app-dir at its build output, or "
    "drive the session API under /api directly.</p></body></html>";

int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound: return 404;
    case ErrorCode::kConflict:
    case ErrorCode::kDuplicate: return 409;
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kParse: return 400;
    default: return 500;
  }
}

}  // namespace

Sheet read_sheet(const std::string& path, const std::string& id) {
  const CsvTable t =
      read_csv_table(path, {"row_id", "image", "question", "option_a", "option_b", "option_c"});
  Sheet sheet;
  sheet.id = id;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    SheetItem item;
    item.row_id = t.at(i, "row_id");
    item.image = t.at(i, "image");
    item.question = t.at(i, "question");
    item.options = {t.at(i, "option_a"), t.at(i, "option_b"), t.at(i, "option_c")};
    sheet.items.push_back(std::move(item));
  }
  return sheet;
}

AnnotationService::AnnotationService(const std::string& sheets_dir) {
  static const std::regex kName(R"(sheet_([0-9]+)\.csv)");
  std::error_code ec;
  if (!fs::is_directory(sheets_dir, ec)) {
    throw Error(ErrorCode::kIo, "sheet directory " + sheets_dir + " does not exist");
  }
  for (const auto& entry : fs::directory_iterator(sheets_dir)) {
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (!std::regex_match(name, m, kName)) continue;
    Sheet s = read_sheet(entry.path().string(), m[1].str());
    sheets_[s.id] = std::move(s);
  }
  if (sheets_.empty()) throw Error(ErrorCode::kNotFound, "no sheet_<k>.csv in " + sheets_dir);
  const fs::path key = fs::path(sheets_dir) / "answer_key.csv";
  if (fs::exists(key)) key_ = read_answer_key(key.string());
  salt_ = std::random_device{}();
  salt_ = (salt_ << 32) ^ std::random_device{}();
}

AnnotationService::AnnotationService(std::vector<Sheet> sheets, std::vector<KeyRow> key)
    : key_(std::move(key)) {
  for (auto& s : sheets) {
    std::string id = s.id;
    sheets_[id] = std::move(s);
  }
  salt_ = std::random_device{}();
}

std::vector<std::pair<std::string, int>> AnnotationService::sheets() const {
  std::vector<std::pair<std::string, int>> out;
  for (const auto& [id, s] : sheets_) out.emplace_back(id, static_cast<int>(s.items.size()));
  return out;
}

std::string AnnotationService::create_session(const std::string& sheet,
                                              const std::string& annotator) {
  if (!sheets_.count(sheet)) throw Error(ErrorCode::kNotFound, "unknown sheet '" + sheet + "'");
  std::lock_guard lock(mu_);
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(splitmix64(salt_ + ++counter_)));
  const std::string id = buf;
  sessions_[id] = Session{sheet, annotator, 0, {}};
  return id;
}

AnnotationService::Session& AnnotationService::session(const std::string& id) {
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::kNotFound, "unknown session '" + id + "'");
  return it->second;
}

const AnnotationService::Session& AnnotationService::session(const std::string& id) const {
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::kNotFound, "unknown session '" + id + "'");
  return it->second;
}

const Sheet& AnnotationService::sheet_of(const Session& s) const { return sheets_.at(s.sheet); }

std::string AnnotationService::next(const std::string& id) const {
  std::lock_guard lock(mu_);
  const Session& s = session(id);
  const Sheet& sheet = sheet_of(s);
  json j = {{"done", s.cursor >= sheet.items.size()},
            {"index", s.cursor},
            {"total", sheet.items.size()}};
  if (s.cursor < sheet.items.size()) {
    const SheetItem& item = sheet.items[s.cursor];
    j["row_id"] = item.row_id;
    j["image_url"] = "/images/" + sheet.id + "/" + item.row_id;
    j["question"] = item.question;
    j["options"] = item.options;
  }
  return j.dump();
}

int AnnotationService::answer(const std::string& id, const std::string& row_id,
                              const std::string& choice) {
  if (choice != "A" && choice != "B" && choice != "C") {
    throw Error(ErrorCode::kInvalidArgument, "choice must be A, B or C");
  }
  std::lock_guard lock(mu_);
  Session& s = session(id);
  const Sheet& sheet = sheet_of(s);
  for (const auto& [answered, c] : s.answers) {
    if (answered == row_id) {
      throw Error(ErrorCode::kConflict, "row '" + row_id + "' was already answered");
    }
  }
  if (s.cursor >= sheet.items.size()) {
    throw Error(ErrorCode::kConflict, "the sheet is already complete");
  }
  if (sheet.items[s.cursor].row_id != row_id) {
    throw Error(ErrorCode::kConflict, "expected an answer for row '" +
                                          sheet.items[s.cursor].row_id + "', got '" + row_id +
                                          "'");
  }
  s.answers.emplace_back(row_id, choice);
  return static_cast<int>(++s.cursor);
}

std::string AnnotationService::export_csv(const std::string& id) const {
  std::lock_guard lock(mu_);
  const Session& s = session(id);
  std::string out = csv_line({"row_id", "answer"});
  for (const auto& [row, choice] : s.answers) out += csv_line({row, choice});
  return out;
}

ModelReport AnnotationService::score(const std::string& id) const {
  std::lock_guard lock(mu_);
  const Session& s = session(id);
  if (key_.empty()) throw Error(ErrorCode::kNotFound, "no answer key loaded");
  return score_human(key_, s.answers, s.annotator.empty() ? "Human eval." : s.annotator);
}

std::string AnnotationService::image_for(const std::string& sheet,
                                         const std::string& row_id) const {
  auto it = sheets_.find(sheet);
  if (it != sheets_.end()) {
    for (const auto& item : it->second.items) {
      if (item.row_id == row_id) return item.image;
    }
  }
  throw Error(ErrorCode::kNotFound, "no row '" + row_id + "' in sheet '" + sheet + "'");
}

struct AnnotationServer::Impl {
  AnnotationServerOptions options;
  AnnotationService service;
  httplib::Server server;
  int port = 0;

  explicit Impl(const AnnotationServerOptions& o) : options(o), service(o.sheets_dir) {
    // httplib's default adds SO_REUSEPORT, which lets a second server share a
    // busy port silently. Plain SO_REUSEADDR still allows quick restarts.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
  }

  void fail(httplib::Response& res, const Error& e) {
    res.status = http_status_for(e.code());
    res.set_content(json{{"error", e.what()}, {"code", error_code_name(e.code())}}.dump(),
                    "application/json");
  }

  template <typename F>
  void guarded(httplib::Response& res, F&& f) {
    try {
      f();
    } catch (const Error& e) {
      fail(res, e);
    } catch (const json::exception& e) {
      fail(res, Error(ErrorCode::kInvalidArgument, std::string("bad JSON body: ") + e.what()));
    }
  }

  void install_routes() {
    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("ok", "text/plain");
    });
    server.Get("/api/sheets", [this](const httplib::Request&, httplib::Response& res) {
      json list = json::array();
      for (const auto& [id, rows] : service.sheets()) list.push_back({{"sheet", id}, {"rows", rows}});
      res.set_content(json{{"sheets", list}}.dump(), "application/json");
    });
    server.Post("/api/session", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const json body = json::parse(req.body);
        const std::string sheet = body.at("sheet").is_string()
                                      ? body["sheet"].get<std::string>()
                                      : body["sheet"].dump();
        const std::string annotator = body.value("annotator", std::string());
        const std::string id = service.create_session(sheet, annotator);
        int total = 0;
        for (const auto& [s, rows] : service.sheets()) {
          if (s == sheet) total = rows;
        }
        res.set_content(json{{"session_id", id}, {"sheet", sheet}, {"total", total}}.dump(),
                        "application/json");
      });
    });
    server.Get(R"(/api/session/([^/]+)/next)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] {
                   res.set_content(service.next(req.matches[1].str()), "application/json");
                 });
               });
    server.Post(R"(/api/session/([^/]+)/answer)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  guarded(res, [&] {
                    const json body = json::parse(req.body);
                    const int cursor =
                        service.answer(req.matches[1].str(), body.at("row_id").get<std::string>(),
                                       body.at("choice").get<std::string>());
                    res.set_content(json{{"ok", true}, {"cursor", cursor}}.dump(),
                                    "application/json");
                  });
                });
    server.Get(R"(/api/session/([^/]+)/export\.csv)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] {
                   res.set_content(service.export_csv(req.matches[1].str()), "text/csv");
                 });
               });
    server.Get(R"(/api/session/([^/]+)/score)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] {
                   const ModelReport r = service.score(req.matches[1].str());
                   const int correct = r.overall.correct + r.no_edit.correct;
                   const int total = r.overall.total + r.no_edit.total;
                   const double acc = total == 0 ? 0.0 : 100.0 * correct / total;
                   res.set_content(json{{"correct", correct},
                                        {"total", total},
                                        {"accuracy", format_percent(acc)}}
                                       .dump(),
                                   "application/json");
                 });
               });
    server.Get(R"(/images/([^/]+)/([^/]+))",
               [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] { serve_image(req.matches[1].str(), req.matches[2].str(), res); });
               });
    if (!options.app_dir.empty()) {
      if (!server.set_mount_point("/app", options.app_dir)) {
        throw Error(ErrorCode::kIo, "app directory " + options.app_dir + " does not exist");
      }
    } else {
      server.Get(R"(/app/?)", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(kPlaceholderPage, "text/html");
      });
    }
  }

  void serve_image(const std::string& sheet_id, const std::string& row_id,
                   httplib::Response& res) {
    const std::string image = service.image_for(sheet_id, row_id);
    const fs::path root = fs::weakly_canonical(options.images_dir);
    const fs::path file = fs::weakly_canonical(root / image);
    const std::string rel = fs::relative(file, root).string();
    if (rel.empty() || rel.rfind("..", 0) == 0) {
      throw Error(ErrorCode::kNotFound, "image outside the image root");
    }
    const auto bytes = read_file_bytes(file.string());
    res.set_content(std::string(bytes.begin(), bytes.end()), "image/png");
  }
};

AnnotationServer::AnnotationServer(const AnnotationServerOptions& options)
    : impl_(std::make_unique<Impl>(options)) {
  impl_->install_routes();
}

AnnotationServer::~AnnotationServer() {
  if (impl_) impl_->server.stop();
}

int AnnotationServer::bind() {
  if (impl_->options.port == 0) {
    impl_->port = impl_->server.bind_to_any_port(impl_->options.host);
    if (impl_->port <= 0) throw Error(ErrorCode::kIo, "cannot bind " + impl_->options.host);
  } else {
    if (!impl_->server.bind_to_port(impl_->options.host, impl_->options.port)) {
      throw Error(ErrorCode::kIo, "cannot bind " + impl_->options.host + ":" +
                                      std::to_string(impl_->options.port) +
                                      " (port in use?)");
    }
    impl_->port = impl_->options.port;
  }
  return impl_->port;
}

void AnnotationServer::run() { impl_->server.listen_after_bind(); }

void AnnotationServer::stop() { impl_->server.stop(); }

int AnnotationServer::port() const { return impl_->port; }

AnnotationService& AnnotationServer::service() { return impl_->service; }

}  // namespace hb
