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

// Synthetic line drawings with a known vanishing point.

#ifndef HAZARDBENCH_TESTS_VP_SYNTH_HPP_
#define HAZARDBENCH_TESTS_VP_SYNTH_HPP_

#include <cmath>
#include <numbers>
#include <vector>

#include "core/raster.hpp"

namespace hb_test {

// Dark lines through (vx, vy) at the given angles (degrees from the x axis),
// on mid-gray. (vx, vy) uses the bottom-left origin.
inline hb::Raster lines_through(int w, int h, double vx, double vy,
                                const std::vector<double>& angles_deg, double thickness = 3.0) {
  hb::Raster img(w, h, 3, 128);
  for (int row = 0; row < h; ++row) {
    const double y = (h - 1) - row;
    for (int x = 0; x < w; ++x) {
      for (double a : angles_deg) {
        const double t = a * std::numbers::pi / 180.0;
        const double d = std::abs(-(x - vx) * std::sin(t) + (y - vy) * std::cos(t));
        if (d < thickness / 2.0) {
          auto* p = img.px(x, row);
          p[0] = p[1] = p[2] = 30;
        }
      }
    }
  }
  return img;
}

// The two-family scene: +-30 and +-55 degrees through (vx, vy).
inline hb::Raster two_family(int w, int h, double vx, double vy) {
  return lines_through(w, h, vx, vy, {30, -30, 55, -55});
}

// Parallel lines at one angle, spaced `spacing` pixels apart along x.
inline hb::Raster parallel_family(int w, int h, double angle_deg, int spacing) {
  hb::Raster img(w, h, 3, 128);
  for (int k = -w / spacing - 2; k <= 2 * w / spacing + 2; ++k) {
    const hb::Raster one = lines_through(w, h, k * spacing, h / 2.0, {angle_deg});
    for (std::size_t i = 0; i < one.pixels.size(); ++i) {
      if (one.pixels[i] == 30) img.pixels[i] = 30;
    }
  }
  return img;
}

}  // namespace hb_test

#endif  // HAZARDBENCH_TESTS_VP_SYNTH_HPP_
