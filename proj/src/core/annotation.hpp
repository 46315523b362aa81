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

// Annotation sessions over exported sheets, and the HTTP server hosting them.
//
//   GET  /health                        -> "ok"
//   GET  /api/sheets                    -> {"sheets": [{"sheet", "rows"}]}
//   POST /api/session                   {sheet, annotator} -> {session_id, sheet, total}
//   GET  /api/session/{id}/next         -> {done, index, total, row_id, image_url,
//                                           question, options}
//   POST /api/session/{id}/answer       {row_id, choice} -> {ok, cursor}
//   GET  /api/session/{id}/export.csv   -> row_id,answer
//   GET  /api/session/{id}/score        -> {correct, total, accuracy}
//   GET  /images/{sheet}/{row_id}       the row's image (opaque path)
//   GET  /app/...                       static UI assets
//
// The next payload never carries scenario, category or ground truth.

#ifndef HAZARDBENCH_CORE_ANNOTATION_HPP_
#define HAZARDBENCH_CORE_ANNOTATION_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "core/report.hpp"
#include "core/sheets.hpp"

namespace hb {

struct SheetItem {
  std::string row_id;
  std::string image;
  std::string question;
  std::array<std::string, 3> options;
};

struct Sheet {
  std::string id;  // "1", "2", ... from sheet_<id>.csv
  std::vector<SheetItem> items;
};

Sheet read_sheet(const std::string& path, const std::string& id);

class AnnotationService {
 public:
  // Loads every sheet_<k>.csv and, when present, answer_key.csv from dir.
  explicit AnnotationService(const std::string& sheets_dir);
  AnnotationService(std::vector<Sheet> sheets, std::vector<KeyRow> key);

  std::vector<std::pair<std::string, int>> sheets() const;

  // kNotFound for an unknown sheet.
  std::string create_session(const std::string& sheet, const std::string& annotator);
  // JSON payload; kNotFound for an unknown session.
  std::string next(const std::string& session) const;
  // kNotFound, kConflict (out of order or duplicate), kInvalidArgument (choice).
  int answer(const std::string& session, const std::string& row_id, const std::string& choice);
  std::string export_csv(const std::string& session) const;
  // kNotFound when no answer key was loaded.
  ModelReport score(const std::string& session) const;
  // Image path of a sheet row relative to the manifest; kNotFound if unknown.
  std::string image_for(const std::string& sheet, const std::string& row_id) const;

 private:
  struct Session {
    std::string sheet;
    std::string annotator;
    std::size_t cursor = 0;
    std::vector<std::pair<std::string, std::string>> answers;  // row_id, choice
  };
  const Sheet& sheet_of(const Session& s) const;
  Session& session(const std::string& id);
  const Session& session(const std::string& id) const;

  std::map<std::string, Sheet> sheets_;
  std::vector<KeyRow> key_;
  mutable std::mutex mu_;
  std::map<std::string, Session> sessions_;
  std::uint64_t counter_ = 0;
  std::uint64_t salt_ = 0;
};

struct AnnotationServerOptions {
  std::string sheets_dir;
  std::string images_dir;  // root for /images
  std::string app_dir;     // root for /app; a minimal page is served when empty
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
};

class AnnotationServer {
 public:
  explicit AnnotationServer(const AnnotationServerOptions& options);
  ~AnnotationServer();

  // Binds the socket; kIo when the port is taken. Returns the bound port.
  int bind();
  // Serves until stop(); bind() must have succeeded.
  void run();
  void stop();
  int port() const;
  AnnotationService& service();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace hb

#endif  // HAZARDBENCH_CORE_ANNOTATION_HPP_
