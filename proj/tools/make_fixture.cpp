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

// Writes the bundled procedural source fixture: six road scenes with a
// perspective road converging on a known vanishing point, plus items.jsonl.
//
//   make_fixture <out_dir> [width height]

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>

#include "core/raster.hpp"
#include "json.hpp"

namespace {

struct Scene {
  const char* id;
  const char* gt;
  const char* source;
  double vp_dx;       // vanishing point offset from the centre, fraction of W
  double horizon;     // horizon row, fraction of H from the top
  const char* question;
};

constexpr Scene kScenes[] = {
    {"drive_001", "left", "DriveBench", -0.05, 0.42,
     "The car ahead is braking hard. Which way should the ego vehicle steer?"},
    {"drive_002", "center", "DriveBench", 0.03, 0.45,
     "What is the safest action for the ego vehicle right now?"},
    {"drive_003", "right", "DriveBench", 0.08, 0.40,
     "Considering the road layout, which direction is safe to drive?"},
    {"sabench_001", "left", "SA-Bench", -0.10, 0.44,
     "An obstacle blocks part of the lane. Where should the vehicle go?"},
    {"sabench_002", "right", "SA-Bench", 0.00, 0.47,
     "Which maneuver keeps the ego vehicle safe?"},
    {"other_001", "center", "Other", 0.06, 0.43,
     "Where should the ego vehicle drive to stay safe?"},
};

void put(hb::Raster& img, int x, int y, int r, int g, int b) {
  if (x < 0 || y < 0 || x >= img.width || y >= img.height) return;
  auto* p = img.px(x, y);
  p[0] = static_cast<std::uint8_t>(std::clamp(r, 0, 255));
  p[1] = static_cast<std::uint8_t>(std::clamp(g, 0, 255));
  p[2] = static_cast<std::uint8_t>(std::clamp(b, 0, 255));
}

hb::Raster render(const Scene& s, int w, int h, std::uint32_t seed) {
  hb::Raster img(w, h, 3);
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> noise(-6, 6);
  const double vx = w * (0.5 + s.vp_dx);
  const double vy = h * s.horizon;
  const double road_half = w * 0.75;  // half-width of the road at the bottom row
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int n = noise(rng);
      if (y < vy) {
        const double t = y / vy;
        put(img, x, y, static_cast<int>(120 + 60 * t) + n, static_cast<int>(160 + 50 * t) + n,
            225 + n);
        continue;
      }
      const double depth = (y - vy) / (h - vy);  // 0 at the horizon, 1 at the bottom
      const double offset = (x - vx) / std::max(depth, 1e-6);
      if (std::abs(offset) < road_half) {
        const double lane = std::abs(std::abs(offset) - road_half * 0.33);
        const bool dash = std::fmod(std::log(depth + 0.02) * 6.0 + 100.0, 2.0) < 1.2;
        if (lane < w * 0.012 && dash) {
          put(img, x, y, 235 + n, 235 + n, 220 + n);
        } else if (std::abs(std::abs(offset) - road_half * 0.95) < w * 0.015) {
          put(img, x, y, 240 + n, 240 + n, 240 + n);
        } else {
          put(img, x, y, 85 + n, 85 + n, 90 + n);
        }
      } else {
        put(img, x, y, 70 + n, static_cast<int>(120 + 30 * depth) + n, 55 + n);
      }
    }
  }
  return img;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2 && argc != 4) {
    std::fprintf(stderr, "usage: %s <out_dir> [width height]\n", argv[0]);
    return 1;
  }
  const std::filesystem::path out = argv[1];
  const int w = argc == 4 ? std::stoi(argv[2]) : 320;
  const int h = argc == 4 ? std::stoi(argv[3]) : 180;
  std::filesystem::create_directories(out / "images");
  std::string manifest;
  std::uint32_t seed = 7;
  for (const auto& s : kScenes) {
    const std::string rel = std::string("images/") + s.id + ".png";
    const auto png = hb::encode_png(render(s, w, h, seed++));
    hb::write_file_bytes((out / rel).string(), png);
    nlohmann::ordered_json j = {
        {"id", s.id}, {"image", rel}, {"question", s.question}, {"gt", s.gt}, {"source", s.source}};
    manifest += j.dump() + "\n";
  }
  hb::write_file_atomic((out / "items.jsonl").string(), manifest);
  std::printf("wrote %zu items to %s\n", std::size(kScenes), out.string().c_str());
  return 0;
}
