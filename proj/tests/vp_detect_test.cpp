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

#include "core/vp_detect.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "core/error.hpp"
#include "vp_synth.hpp"

namespace hb {
namespace {

using hb_test::two_family;

TEST(DetectVp, RecoversKnownIntersection) {
  const auto vp = detect_vp(two_family(900, 600, 450, 310));
  ASSERT_TRUE(vp);
  EXPECT_NEAR(vp->x, 450, 5);
  EXPECT_NEAR(vp->y, 310, 5);
  EXPECT_GE(vp->support, VpParams{}.min_support);
  EXPECT_GT(vp->confidence, 0.0);
  EXPECT_LE(vp->confidence, 1.0);
}

TEST(DetectVp, UniformImageIsNotFound) {
  EXPECT_FALSE(detect_vp(Raster(900, 600, 3, 128)));
}

TEST(DetectVp, SingleParallelFamilyIsNotFound) {
  EXPECT_FALSE(detect_vp(hb_test::parallel_family(900, 600, 40, 120)));
}

TEST(DetectVp, TooSmall) {
  try {
    detect_vp(Raster(31, 40, 3, 0));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(DetectVp, Deterministic) {
  const Raster img = two_family(640, 400, 300, 220);
  const auto a = detect_vp(img);
  const auto b = detect_vp(img);
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->x, b->x);
  EXPECT_EQ(a->y, b->y);
  EXPECT_EQ(a->support, b->support);
  EXPECT_EQ(a->confidence, b->confidence);
}

TEST(DetectVp, TranslationEquivariance) {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> dx(-120, 120), dy(-80, 80);
  for (int i = 0; i < 5; ++i) {
    const double x = 450 + dx(rng);
    const double y = 310 + dy(rng);
    const auto vp = detect_vp(two_family(900, 600, x, y));
    ASSERT_TRUE(vp) << "offset " << i;
    EXPECT_NEAR(vp->x, x, 5);
    EXPECT_NEAR(vp->y, y, 5);
  }
}

TEST(DetectVp, HalfTurnAboutCentre) {
  const double cx = (900 - 1) / 2.0;
  const double cy = (600 - 1) / 2.0;
  const Raster img = two_family(900, 600, cx, cy);
  Raster turned = img;
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) turned.pixels[i * 3 + c] = img.pixels[(n - 1 - i) * 3 + c];
  }
  const auto a = detect_vp(img);
  const auto b = detect_vp(turned);
  ASSERT_TRUE(a && b);
  EXPECT_NEAR(a->x, b->x, 5);
  EXPECT_NEAR(a->y, b->y, 5);
}

TEST(DetectVp, DiagnosticsDescribeTheGrid) {
  VpDiagnostics d;
  detect_vp(two_family(900, 600, 450, 310), {}, &d);
  EXPECT_FALSE(d.segments.empty());
  EXPECT_EQ(d.votes.size(), static_cast<std::size_t>(d.grid_rows) * d.grid_cols);
  EXPECT_DOUBLE_EQ(d.cell_width, 900.0 / 40);
  EXPECT_DOUBLE_EQ(d.cell_height, 600.0 / 40);
  const std::string text = d.to_text();
  EXPECT_NE(text.find("segments"), std::string::npos);
  for (const auto& s : d.segments) {
    EXPECT_GE(s.length, 0.05 * 600);
    EXPECT_GE(s.angle, 0.0);
    EXPECT_LT(s.angle, std::numbers::pi);
  }
}

TEST(VpFallback, UniformImageUsesFortyFivePercent) {
  const auto est = vp_y_or_fallback(Raster(900, 600, 3, 128));
  EXPECT_TRUE(est.fallback);
  EXPECT_DOUBLE_EQ(est.y, 270);
}

TEST(VpFallback, ClampsIntoFrame) {
  VPoint above{100, 650, 20, 0.5};
  EXPECT_DOUBLE_EQ(resolve_vp_y(above, 600).y, 599);
  VPoint below{100, -20, 20, 0.5};
  EXPECT_DOUBLE_EQ(resolve_vp_y(below, 600).y, 0);
  EXPECT_FALSE(resolve_vp_y(below, 600).fallback);
  EXPECT_DOUBLE_EQ(resolve_vp_y(std::nullopt, 601).y, 270);  // round(270.45)
}

TEST(VpFallback, DetectableSceneUsesDetection) {
  const auto est = vp_y_or_fallback(two_family(900, 600, 450, 310));
  EXPECT_FALSE(est.fallback);
  EXPECT_NEAR(est.y, 310, 5);
}

}  // namespace
}  // namespace hb
