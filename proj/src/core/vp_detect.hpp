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

// Rule-based vanishing-point detection.
//
// Pipeline: grayscale -> Sobel gradient magnitude thresholded at a percentile
// -> orientation-restricted Hough accumulator -> progressive segment
// extraction along accumulator peaks -> pairwise segment intersections ->
// density vote on a coarse grid -> centroid around the winning cell.
//
// Output coordinates use the same bottom-left origin as the geometry module.

#ifndef HAZARDBENCH_CORE_VP_DETECT_HPP_
#define HAZARDBENCH_CORE_VP_DETECT_HPP_

#include <optional>
#include <string>
#include <vector>

#include "core/raster.hpp"

namespace hb {

struct VpParams {
  // Edge threshold is this percentile of the gradient-magnitude image.
  double edge_percentile = 0.75;
  // Segments shorter than this fraction of min(W, H) are dropped.
  double min_segment_fraction = 0.05;
  // Segments within this many degrees of horizontal or vertical are dropped.
  double excluded_band_deg = 8.0;
  // Vote cell is (W / grid_divisions) x (H / grid_divisions).
  int grid_divisions = 40;
  int min_support = 10;
  // Intersections farther than this fraction of max(W, H) outside the frame
  // are discarded.
  double outside_margin_fraction = 0.5;

  // Accumulator and segment-tracing knobs.
  double theta_step_deg = 1.0;
  int theta_vote_spread = 5;  // bins either side of the gradient orientation
  int max_lines = 64;
  double max_gap_px = 4.0;
  double min_pair_angle_deg = 2.0;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct LineSegment {
  Point2 a;
  Point2 b;
  double angle = 0.0;   // radians in [0, pi)
  double length = 0.0;  // pixels
};

struct VPoint {
  double x = 0.0;
  double y = 0.0;
  int support = 0;
  double confidence = 0.0;
};

struct VpDiagnostics {
  std::vector<LineSegment> segments;
  double cell_width = 0.0;
  double cell_height = 0.0;
  double grid_origin_x = 0.0;  // bottom-left frame
  double grid_origin_y = 0.0;
  int grid_cols = 0;
  int grid_rows = 0;
  std::vector<int> votes;  // row-major, grid_rows x grid_cols
  int total_intersections = 0;

  std::string to_text() const;
};

// Throws kInvalidArgument for images smaller than 32x32. NotFound is nullopt.
std::optional<VPoint> detect_vp(const Raster& image, const VpParams& params = {},
                                VpDiagnostics* diagnostics = nullptr);

struct VpEstimate {
  double y = 0.0;  // clamped into [0, H-1]
  bool fallback = false;
  std::optional<VPoint> vp;
};

// Total variant: clamped detected y, or round(0.45 H) when nothing is found.
VpEstimate vp_y_or_fallback(const Raster& image, const VpParams& params = {},
                            VpDiagnostics* diagnostics = nullptr);
// Clamp/fallback rule on its own, for callers that already ran detection.
VpEstimate resolve_vp_y(const std::optional<VPoint>& vp, int height);

}  // namespace hb

#endif  // HAZARDBENCH_CORE_VP_DETECT_HPP_
