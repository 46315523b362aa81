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

// JSON-over-HTTP clients for the editor and chat endpoints.
//
//   POST /v1/edit      {image_b64, mask_b64, params, prompt, seed} -> {image_b64}
//   POST /v1/outpaint  {image_b64, pixels, side}                   -> {image_b64}
//   POST /v1/chat      {images_b64, prompt}                        -> {text}
//
// Failures are reported as {code, message} bodies with a non-2xx status.

#ifndef HAZARDBENCH_CORE_HTTP_BACKENDS_HPP_
#define HAZARDBENCH_CORE_HTTP_BACKENDS_HPP_

#include <atomic>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "core/backends.hpp"

namespace hb {

struct EndpointConfig {
  std::string url;
  std::string token;  // sent as a bearer token when non-empty
  int timeout_ms = 120000;
  int max_in_flight = 4;
};

struct ParsedUrl {
  std::string scheme;  // "http" or "https"
  std::string host;
  int port = 0;
  std::string base_path;  // no trailing slash; may be empty

  std::string origin() const;
};

// Throws kConfiguration for anything that is not http(s)://host[:port][/path].
ParsedUrl parse_endpoint_url(std::string_view url);

// Blocks callers once `limit` requests are outstanding.
class InFlightLimiter {
 public:
  explicit InFlightLimiter(int limit) : limit_(limit < 1 ? 1 : limit) {}
  void acquire();
  void release();
  int peak() const { return peak_.load(); }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int limit_;
  int active_ = 0;
  std::atomic<int> peak_{0};
};

// One endpoint: POSTs JSON, maps transport and status failures onto typed
// errors. Thread-safe; each call opens its own connection.
class HttpTransport {
 public:
  explicit HttpTransport(EndpointConfig cfg);

  // Returns the response body of a 2xx reply.
  std::string post_json(const std::string& path, const std::string& body);

  const EndpointConfig& config() const { return cfg_; }
  long requests() const { return requests_.load(); }
  long failures() const { return failures_.load(); }
  int peak_in_flight() const { return limiter_.peak(); }

 private:
  EndpointConfig cfg_;
  ParsedUrl url_;
  InFlightLimiter limiter_;
  std::atomic<long> requests_{0};
  std::atomic<long> failures_{0};
};

class HttpEditor : public Editor {
 public:
  // With `composite` on, only pixels inside the mask are taken from the
  // endpoint's output; everything else is copied from the request image.
  HttpEditor(EndpointConfig cfg, bool composite = true);

  PngBytes edit(const EditRequest& req) override;
  PngBytes outpaint(const OutpaintRequest& req) override;

  const HttpTransport& transport() const { return transport_; }

 private:
  HttpTransport transport_;
  bool composite_;
};

class HttpChatModel : public ChatModel {
 public:
  explicit HttpChatModel(EndpointConfig cfg) : transport_(std::move(cfg)) {}
  std::string chat(const std::vector<PngBytes>& images, std::string_view prompt) override;

  const HttpTransport& transport() const { return transport_; }

 private:
  HttpTransport transport_;
};

// Pastes the masked pixels of `edited` over `original`. Both must have equal
// dims; the mask is single channel with 255 = take edited.
Raster composite_inside_mask(const Raster& original, const Raster& edited, const Raster& mask);

// Extracts the named base64 PNG field from a JSON reply; kDecode on failure.
PngBytes decode_image_reply(const std::string& body, const char* field = "image_b64");

}  // namespace hb

#endif  // HAZARDBENCH_CORE_HTTP_BACKENDS_HPP_
