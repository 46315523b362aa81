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

#include <arpa/inet.h>
#include <gtest/gtest.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <thread>
#include <vector>

#include "core/error.hpp"
#include "httplib.h"
#include "json.hpp"

namespace hb {
namespace {

using json = nlohmann::json;

// A local fake model server. Each test installs the routes it needs.
class FakeServer {
 public:
  FakeServer() = default;
  ~FakeServer() { stop(); }

  httplib::Server& server() { return server_; }

  void start() {
    port_ = server_.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void stop() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }
  std::string url(const std::string& base = "") const {
    return "http://127.0.0.1:" + std::to_string(port_) + base;
  }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

EndpointConfig endpoint(const std::string& url, int timeout_ms = 5000, int in_flight = 4) {
  EndpointConfig e;
  e.url = url;
  e.timeout_ms = timeout_ms;
  e.max_in_flight = in_flight;
  return e;
}

Raster gradient(int w, int h) {
  Raster img(w, h, 3);
  for (int row = 0; row < h; ++row) {
    for (int col = 0; col < w; ++col) {
      auto* p = img.px(col, row);
      p[0] = static_cast<std::uint8_t>(col * 7);
      p[1] = static_cast<std::uint8_t>(row * 11);
      p[2] = 40;
    }
  }
  return img;
}

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}

void reply_image(httplib::Response& res, const Raster& img) {
  res.set_content(json{{"image_b64", base64_encode(encode_png(img))}}.dump(), "application/json");
}

// Inverts every pixel of the request image.
void invert_handler(const httplib::Request& req, httplib::Response& res) {
  const auto body = json::parse(req.body);
  Raster img = decode_png(base64_decode(body["image_b64"].get<std::string>()));
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(255 - p);
  reply_image(res, img);
}

TEST(ParseEndpointUrl, AcceptsAndRejects) {
  const auto u = parse_endpoint_url("https://models.example:8443/api/");
  EXPECT_EQ(u.scheme, "https");
  EXPECT_EQ(u.host, "models.example");
  EXPECT_EQ(u.port, 8443);
  EXPECT_EQ(u.base_path, "/api");
  EXPECT_EQ(parse_endpoint_url("http://localhost").port, 80);
  EXPECT_EQ(parse_endpoint_url("https://h").port, 443);
  for (const char* bad : {"", "localhost:80", "ftp://x", "http://", "http://a b", "http://h:99999"}) {
    EXPECT_EQ(code_of([&] { parse_endpoint_url(bad); }), ErrorCode::kConfiguration) << bad;
  }
}

TEST(HttpEditor, EditCompositesInsideMask) {
  FakeServer fake;
  std::string auth;
  fake.server().Post("/v1/edit", [&](const httplib::Request& req, httplib::Response& res) {
    auth = req.get_header_value("Authorization");
    const auto body = json::parse(req.body);
    EXPECT_EQ(body["prompt"], "Render a dog, facing left.");
    EXPECT_EQ(body["seed"], 42u);
    invert_handler(req, res);
  });
  fake.start();

  const Raster img = gradient(30, 20);
  const MaskRegion mask{10, 20, 0, 20, Frame::original()};
  EditRequest req;
  req.image = encode_png(img);
  req.mask = encode_png(rasterize_mask(mask, 30, 20));
  req.prompt = "Render a dog, facing left.";
  req.seed = 42;

  EndpointConfig cfg = endpoint(fake.url());
  cfg.token = "secret";
  HttpEditor composite(cfg, true);
  const Raster out = decode_png(composite.edit(req));
  EXPECT_EQ(auth, "Bearer secret");
  for (int row = 0; row < 20; ++row) {
    for (int col = 0; col < 30; ++col) {
      const bool in = col >= 10 && col < 20;
      EXPECT_EQ(out.px(col, row)[0], in ? 255 - img.px(col, row)[0] : img.px(col, row)[0]);
    }
  }
  HttpEditor raw(endpoint(fake.url()), false);
  const Raster all = decode_png(raw.edit(req));
  EXPECT_EQ(all.px(0, 0)[2], 255 - 40);
  EXPECT_EQ(raw.transport().requests(), 1);
}

TEST(HttpEditor, DimMismatchReply) {
  FakeServer fake;
  fake.server().Post("/v1/edit", [](const httplib::Request&, httplib::Response& res) {
    reply_image(res, gradient(5, 5));
  });
  fake.server().Post("/v1/outpaint", [](const httplib::Request&, httplib::Response& res) {
    reply_image(res, gradient(30, 20));  // not widened
  });
  fake.start();
  HttpEditor editor(endpoint(fake.url()));
  EditRequest req;
  req.image = encode_png(gradient(30, 20));
  req.mask = encode_png(rasterize_mask({0, 5, 0, 5, Frame::original()}, 30, 20));
  req.prompt = "Render a cat, facing forward.";
  EXPECT_EQ(code_of([&] { editor.edit(req); }), ErrorCode::kDimMismatch);
  EXPECT_EQ(code_of([&] { editor.outpaint({req.image, Edge::kLeft, 6}); }),
            ErrorCode::kDimMismatch);
}

TEST(HttpEditor, RequestRejectedBeforeTransport) {
  FakeServer fake;
  std::atomic<int> calls{0};
  fake.server().Post("/v1/edit", [&](const httplib::Request&, httplib::Response&) { ++calls; });
  fake.start();
  HttpEditor editor(endpoint(fake.url()));
  EditRequest req;
  req.image = encode_png(gradient(30, 20));
  req.mask = encode_png(rasterize_mask({0, 5, 0, 5, Frame::original()}, 31, 20));
  req.prompt = "Render a cat, facing forward.";
  EXPECT_EQ(code_of([&] { editor.edit(req); }), ErrorCode::kDimMismatch);
  EXPECT_EQ(calls.load(), 0);
}

TEST(HttpEditor, Outpaint) {
  FakeServer fake;
  fake.server().Post("/v1/outpaint", [](const httplib::Request& req, httplib::Response& res) {
    const auto body = json::parse(req.body);
    const Raster img = decode_png(base64_decode(body["image_b64"].get<std::string>()));
    const int r = body["pixels"].get<int>();
    const Edge side = body["side"] == "left" ? Edge::kLeft : Edge::kRight;
    reply_image(res, pad_raster(img, {side, r}, 7));
  });
  fake.start();
  HttpEditor editor(endpoint(fake.url()));
  const Raster img = gradient(30, 20);
  const Raster out = decode_png(editor.outpaint({encode_png(img), Edge::kLeft, 6}));
  EXPECT_EQ(out.width, 36);
  EXPECT_EQ(crop_to_mask(out, {6, 36, 0, 20, Frame::original()}), img);
}

TEST(HttpChatModel, TextReplyAndBasePath) {
  FakeServer fake;
  std::atomic<int> images{0};
  fake.server().Post("/api/v1/chat", [&](const httplib::Request& req, httplib::Response& res) {
    const auto body = json::parse(req.body);
    images = static_cast<int>(body["images_b64"].size());
    res.set_content(json{{"text", "The object is facing left."}}.dump(), "application/json");
  });
  fake.start();
  HttpChatModel chat(endpoint(fake.url("/api")));
  const PngBytes png = encode_png(gradient(4, 4));
  EXPECT_EQ(chat.chat({png, png}, "p"), "The object is facing left.");
  EXPECT_EQ(images.load(), 2);
}

TEST(HttpChatModel, StatusAndDecodeErrors) {
  FakeServer fake;
  fake.server().Post("/v1/chat", [](const httplib::Request& req, httplib::Response& res) {
    if (req.body.find("busy") != std::string::npos) {
      res.status = 503;
      res.set_content(R"({"code":"overloaded","message":"try later"})", "application/json");
    } else {
      res.set_content(R"({"not_text":1})", "application/json");
    }
  });
  fake.start();
  HttpChatModel chat(endpoint(fake.url()));
  try {
    chat.chat({}, "busy");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kHttpStatus);
    EXPECT_NE(std::string(e.what()).find("try later"), std::string::npos);
    EXPECT_TRUE(e.retryable());
  }
  EXPECT_EQ(code_of([&] { chat.chat({}, "fine"); }), ErrorCode::kDecode);
  // Decode errors happen above the transport; only the 503 counts there.
  EXPECT_EQ(chat.transport().failures(), 1);
}

TEST(HttpChatModel, Timeout) {
  FakeServer fake;
  fake.server().Post("/v1/chat", [](const httplib::Request&, httplib::Response& res) {
    std::this_thread::sleep_for(std::chrono::milliseconds(600));
    res.set_content(R"({"text":"late"})", "application/json");
  });
  fake.start();
  HttpChatModel chat(endpoint(fake.url(), 150));
  const auto start = std::chrono::steady_clock::now();
  EXPECT_EQ(code_of([&] { chat.chat({}, "p"); }), ErrorCode::kTimeout);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::milliseconds(550));
}

TEST(HttpChatModel, ConnectionRefused) {
  // Bound but never listening: connects are refused.
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  ASSERT_GE(fd, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  ASSERT_EQ(::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)), 0);
  socklen_t len = sizeof(addr);
  ASSERT_EQ(::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len), 0);
  const int port = ntohs(addr.sin_port);
  HttpChatModel chat(endpoint("http://127.0.0.1:" + std::to_string(port), 2000));
  EXPECT_EQ(code_of([&] { chat.chat({}, "p"); }), ErrorCode::kTransport);
  ::close(fd);
}

TEST(HttpTransport, BoundedInFlight) {
  FakeServer fake;
  std::atomic<int> active{0}, peak{0};
  fake.server().Post("/v1/chat", [&](const httplib::Request&, httplib::Response& res) {
    const int now = ++active;
    int prev = peak.load();
    while (now > prev && !peak.compare_exchange_weak(prev, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(60));
    --active;
    res.set_content(R"({"text":"ok"})", "application/json");
  });
  fake.start();
  HttpChatModel chat(endpoint(fake.url(), 5000, 2));
  std::vector<std::thread> callers;
  for (int i = 0; i < 8; ++i) {
    callers.emplace_back([&] { EXPECT_EQ(chat.chat({}, "p"), "ok"); });
  }
  for (auto& t : callers) t.join();
  EXPECT_LE(peak.load(), 2);
  EXPECT_EQ(chat.transport().peak_in_flight(), 2);
  EXPECT_EQ(chat.transport().requests(), 8);
}

TEST(DecodeImageReply, Errors) {
  EXPECT_EQ(code_of([] { decode_image_reply("not json"); }), ErrorCode::kDecode);
  EXPECT_EQ(code_of([] { decode_image_reply(R"({"image_b64":"@@@"})"); }), ErrorCode::kDecode);
  EXPECT_EQ(code_of([] { decode_image_reply(R"({"other":1})"); }), ErrorCode::kDecode);
  const PngBytes png = encode_png(gradient(3, 3));
  EXPECT_EQ(decode_image_reply(json{{"image_b64", base64_encode(png)}}.dump()), png);
}

}  // namespace
}  // namespace hb
