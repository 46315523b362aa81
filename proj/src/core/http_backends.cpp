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

#include "core/http_backends.hpp"

#include <chrono>
#include <regex>

#include "core/error.hpp"
#include "httplib.h"
#include "json.hpp"

namespace hb {

namespace {

using json = nlohmann::json;

std::string status_message(int status, const std::string& body) {
  std::string msg = "HTTP " + std::to_string(status);
  const json parsed = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_object()) {
    if (parsed.contains("code")) msg += " [" + parsed["code"].dump() + "]";
    if (parsed.contains("message") && parsed["message"].is_string()) {
      msg += ": " + parsed["message"].get<std::string>();
    }
  } else if (!body.empty()) {
    msg += ": " + body.substr(0, 200);
  }
  return msg;
}

class InFlightGuard {
 public:
  explicit InFlightGuard(InFlightLimiter& l) : l_(l) { l_.acquire(); }
  ~InFlightGuard() { l_.release(); }
  InFlightGuard(const InFlightGuard&) = delete;
  InFlightGuard& operator=(const InFlightGuard&) = delete;

 private:
  InFlightLimiter& l_;
};

ImageDims dims_of(const Raster& r) { return {r.width, r.height}; }

}  // namespace

std::string ParsedUrl::origin() const {
  return scheme + "://" + host + ":" + std::to_string(port);
}

ParsedUrl parse_endpoint_url(std::string_view url) {
  static const std::regex kPattern(R"(^(https?)://([A-Za-z0-9._\-]+|\[[0-9A-Fa-f:.]+\])(?::(\d{1,5}))?(/[^\s?#]*)?$)");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(url.begin(), url.end(), m, kPattern)) {
    throw Error(ErrorCode::kConfiguration, "not an http(s) endpoint URL: '" + std::string(url) + "'");
  }
  ParsedUrl out;
  out.scheme = m[1].str();
  out.host = m[2].str();
  if (m[3].matched) {
    out.port = std::stoi(m[3].str());
    if (out.port < 1 || out.port > 65535) {
      throw Error(ErrorCode::kConfiguration, "port out of range in '" + std::string(url) + "'");
    }
  } else {
    out.port = out.scheme == "https" ? 443 : 80;
  }
  out.base_path = m[4].matched ? m[4].str() : "";
  while (!out.base_path.empty() && out.base_path.back() == '/') out.base_path.pop_back();
  return out;
}

void InFlightLimiter::acquire() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return active_ < limit_; });
  ++active_;
  int seen = peak_.load();
  while (active_ > seen && !peak_.compare_exchange_weak(seen, active_)) {
  }
}

void InFlightLimiter::release() {
  {
    std::lock_guard lock(mu_);
    --active_;
  }
  cv_.notify_one();
}

HttpTransport::HttpTransport(EndpointConfig cfg)
    : cfg_(std::move(cfg)), url_(parse_endpoint_url(cfg_.url)), limiter_(cfg_.max_in_flight) {
  if (cfg_.timeout_ms <= 0) {
    throw Error(ErrorCode::kConfiguration, "endpoint timeout must be positive");
  }
}

std::string HttpTransport::post_json(const std::string& path, const std::string& body) {
  InFlightGuard guard(limiter_);
  ++requests_;
  httplib::Client client(url_.origin());
  const auto timeout = std::chrono::milliseconds(cfg_.timeout_ms);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  httplib::Headers headers;
  if (!cfg_.token.empty()) headers.emplace("Authorization", "Bearer " + cfg_.token);

  const auto start = std::chrono::steady_clock::now();
  auto res = client.Post(url_.base_path + path, headers, body, "application/json");
  if (!res) {
    ++failures_;
    const auto elapsed = std::chrono::steady_clock::now() - start;
    const httplib::Error err = res.error();
    if (err == httplib::Error::ConnectionTimeout ||
        (err == httplib::Error::Read && elapsed >= timeout * 9 / 10)) {
      throw Error(ErrorCode::kTimeout, cfg_.url + path + " timed out after " +
                                           std::to_string(cfg_.timeout_ms) + " ms");
    }
    throw Error(ErrorCode::kTransport, cfg_.url + path + ": " + httplib::to_string(err));
  }
  if (res->status < 200 || res->status >= 300) {
    ++failures_;
    throw Error(ErrorCode::kHttpStatus, cfg_.url + path + ": " + status_message(res->status, res->body));
  }
  return res->body;
}

PngBytes decode_image_reply(const std::string& body, const char* field) {
  const json parsed = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (!parsed.is_object() || !parsed.contains(field) || !parsed[field].is_string()) {
    throw Error(ErrorCode::kDecode, std::string("reply lacks a string '") + field + "' field");
  }
  PngBytes png = base64_decode(parsed[field].get<std::string>());
  decode_png(png);  // validates
  return png;
}

Raster composite_inside_mask(const Raster& original, const Raster& edited, const Raster& mask) {
  if (dims_of(original) != dims_of(edited) || dims_of(original) != dims_of(mask)) {
    throw Error(ErrorCode::kDimMismatch, "composite: image, edit and mask sizes differ");
  }
  Raster out = to_rgb(original);
  const Raster src = to_rgb(edited);
  const Raster m = to_gray(mask);
  for (int row = 0; row < out.height; ++row) {
    for (int x = 0; x < out.width; ++x) {
      if (m.px(x, row)[0] < 128) continue;
      std::copy_n(src.px(x, row), 3, out.px(x, row));
    }
  }
  return out;
}

HttpEditor::HttpEditor(EndpointConfig cfg, bool composite)
    : transport_(std::move(cfg)), composite_(composite) {}

PngBytes HttpEditor::edit(const EditRequest& req) {
  validate_edit_request(req);
  PngBytes png = decode_image_reply(transport_.post_json("/v1/edit", encode_edit_request(req)));
  const Raster input = decode_png(req.image);
  const Raster output = decode_png(png);
  if (dims_of(input) != dims_of(output)) {
    throw Error(ErrorCode::kDimMismatch,
                "editor returned " + std::to_string(output.width) + "x" +
                    std::to_string(output.height) + " for a " + std::to_string(input.width) +
                    "x" + std::to_string(input.height) + " request");
  }
  if (!composite_) return png;
  return encode_png(composite_inside_mask(input, output, decode_png(req.mask)));
}

PngBytes HttpEditor::outpaint(const OutpaintRequest& req) {
  validate_outpaint_request(req);
  PngBytes png =
      decode_image_reply(transport_.post_json("/v1/outpaint", encode_outpaint_request(req)));
  const Raster input = decode_png(req.image);
  const Raster output = decode_png(png);
  if (output.width != input.width + req.pixels || output.height != input.height) {
    throw Error(ErrorCode::kDimMismatch,
                "outpaint returned " + std::to_string(output.width) + "x" +
                    std::to_string(output.height) + ", expected " +
                    std::to_string(input.width + req.pixels) + "x" + std::to_string(input.height));
  }
  return png;
}

std::string HttpChatModel::chat(const std::vector<PngBytes>& images, std::string_view prompt) {
  const std::string body = transport_.post_json("/v1/chat", encode_chat_request(images, prompt));
  const json parsed = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (!parsed.is_object() || !parsed.contains("text") || !parsed["text"].is_string()) {
    throw Error(ErrorCode::kDecode, "chat reply lacks a string 'text' field");
  }
  return parsed["text"].get<std::string>();
}

}  // namespace hb
