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

// Pixel-coordinate math for scene regions and edit masks.
//
// All regions use a bottom-left origin with half-open extents
// [x_min, x_max) x [y_min, y_max). Rasters are stored top-left; the y-flip
// happens only in crop_to_mask() and rasterize_mask().

#ifndef HAZARDBENCH_CORE_GEOMETRY_HPP_
#define HAZARDBENCH_CORE_GEOMETRY_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "core/raster.hpp"

namespace hb {

struct ImageDims {
  int width = 0;
  int height = 0;

  // Throws kDegenerateDimensions unless width >= 3 and height >= 1.
  void validate() const;
  friend bool operator==(const ImageDims&, const ImageDims&) = default;
};

enum class Action { kLeft = 0, kCenter = 1, kRight = 2 };

inline constexpr std::array<Action, 3> kAllActions = {Action::kLeft, Action::kCenter,
                                                      Action::kRight};

// "go left" / "go straight" / "go right"
std::string_view action_option_text(Action a);
// "left" / "center" / "right" as used in manifests.
std::string_view action_name(Action a);
std::optional<Action> parse_action_name(std::string_view s);

enum class Edge { kLeft, kRight };

std::string_view edge_name(Edge e);

struct Frame {
  enum class Kind { kOriginal, kPaddedLeft, kPaddedRight };
  Kind kind = Kind::kOriginal;
  int pad = 0;

  static Frame original() { return {}; }
  static Frame padded(Edge side, int r) {
    return {side == Edge::kLeft ? Kind::kPaddedLeft : Kind::kPaddedRight, r};
  }
  // Width of this frame for an original image of width `original_width`.
  int width_for(int original_width) const {
    return kind == Kind::kOriginal ? original_width : original_width + pad;
  }
  friend bool operator==(const Frame&, const Frame&) = default;
};

struct MaskRegion {
  int x_min = 0;
  int x_max = 0;
  int y_min = 0;
  int y_max = 0;
  Frame frame;

  int width() const { return x_max - x_min; }
  int height() const { return y_max - y_min; }
  std::int64_t area() const {
    return static_cast<std::int64_t>(width()) * height();
  }
  bool contains(const MaskRegion& other) const {
    return other.x_min >= x_min && other.x_max <= x_max && other.y_min >= y_min &&
           other.y_max <= y_max;
  }
  bool intersects(const MaskRegion& other) const {
    return x_min < other.x_max && other.x_min < x_max && y_min < other.y_max &&
           other.y_min < y_max;
  }
  // Throws kFrameMismatch if the region is degenerate or leaves the
  // width x height canvas.
  void validate_within(int frame_width, int frame_height) const;

  friend bool operator==(const MaskRegion&, const MaskRegion&) = default;
};

struct PadSpec {
  Edge side = Edge::kLeft;
  int pixels = 0;
  friend bool operator==(const PadSpec&, const PadSpec&) = default;
};

struct GeometryConfig {
  int intrusion_half_width = 0;  // l
  int pad_width = 0;             // r
  double distance_band = 0.1;    // d

  // r = round(0.2 W), l = round(0.06 W), d = 0.1
  static GeometryConfig defaults_for(const ImageDims& dims);
  // Throws kConfiguration unless l > 0, 0 < d <= 1 and r > l.
  void validate() const;
};

std::array<MaskRegion, 3> split_regions(const ImageDims& dims);
MaskRegion region_for_action(Action action, const ImageDims& dims);

// Mask in the padded frame (width W + r) straddling the original image edge.
MaskRegion intrusion_mask(Edge side, const ImageDims& dims, const GeometryConfig& cfg);

// Window of the padded canvas that survives the r-pixel crop, expressed in
// padded coordinates.
MaskRegion crop_after_pad(const ImageDims& original, const ImageDims& padded,
                          const PadSpec& pad);

// Part of a padded-frame mask that survives the crop, in original coordinates.
// Returns nullopt when nothing survives.
std::optional<MaskRegion> mask_after_crop(const MaskRegion& padded_mask,
                                          const ImageDims& original);

// Band |y - vp_y| <= d*H inside the ground-truth region.
MaskRegion distance_mask(const MaskRegion& gt_region, double vp_y,
                         const ImageDims& dims, const GeometryConfig& cfg);

Raster crop_to_mask(const Raster& image, const MaskRegion& mask);
// 255 inside the mask, 0 outside; dims are the mask frame's dims.
Raster rasterize_mask(const MaskRegion& mask, int frame_width, int frame_height);

// Pads `image` on one side; the new columns are filled from `fill`.
Raster pad_raster(const Raster& image, const PadSpec& pad, std::uint8_t fill = 0);

std::string describe(const MaskRegion& m);

}  // namespace hb

#endif  // HAZARDBENCH_CORE_GEOMETRY_HPP_
