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

#include "core/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

#include "core/error.hpp"

namespace hb {

namespace {

// Snaps values within this distance of an integer before floor/ceil so that
// d*H products like 0.1*600 do not widen the band by a pixel.
constexpr double kSnap = 1e-9;

std::string dims_str(int w, int h) {
  std::ostringstream os;
  os << w << "x" << h;
  return os.str();
}

}  // namespace

void ImageDims::validate() const {
  if (width < 3 || height < 1) {
    throw Error(ErrorCode::kDegenerateDimensions,
                "image must be at least 3x1, got " + dims_str(width, height));
  }
}

std::string_view action_option_text(Action a) {
  switch (a) {
    case Action::kLeft: return "go left";
    case Action::kCenter: return "go straight";
    case Action::kRight: return "go right";
  }
  return "";
}

std::string_view action_name(Action a) {
  switch (a) {
    case Action::kLeft: return "left";
    case Action::kCenter: return "center";
    case Action::kRight: return "right";
  }
  return "";
}

std::optional<Action> parse_action_name(std::string_view s) {
  if (s == "left" || s == "L") return Action::kLeft;
  if (s == "center" || s == "straight" || s == "C") return Action::kCenter;
  if (s == "right" || s == "R") return Action::kRight;
  return std::nullopt;
}

std::string_view edge_name(Edge e) { return e == Edge::kLeft ? "left" : "right"; }

void MaskRegion::validate_within(int frame_width, int frame_height) const {
  if (x_min < 0 || y_min < 0 || x_min >= x_max || y_min >= y_max ||
      x_max > frame_width || y_max > frame_height) {
    throw Error(ErrorCode::kFrameMismatch,
                "mask " + describe(*this) + " does not fit a " +
                    dims_str(frame_width, frame_height) + " frame");
  }
}

GeometryConfig GeometryConfig::defaults_for(const ImageDims& dims) {
  GeometryConfig cfg;
  cfg.pad_width = static_cast<int>(std::lround(0.2 * dims.width));
  cfg.intrusion_half_width = static_cast<int>(std::lround(0.06 * dims.width));
  cfg.distance_band = 0.1;
  return cfg;
}

void GeometryConfig::validate() const {
  if (intrusion_half_width <= 0) {
    throw Error(ErrorCode::kConfiguration, "intrusion half-width l must be positive");
  }
  if (!(distance_band > 0.0 && distance_band <= 1.0)) {
    throw Error(ErrorCode::kConfiguration, "distance band d must lie in (0, 1]");
  }
  if (pad_width <= intrusion_half_width) {
    throw Error(ErrorCode::kConfiguration,
                "pad width r must exceed intrusion half-width l (r=" +
                    std::to_string(pad_width) +
                    ", l=" + std::to_string(intrusion_half_width) + ")");
  }
}

std::array<MaskRegion, 3> split_regions(const ImageDims& dims) {
  dims.validate();
  const int b1 = dims.width / 3;
  const int b2 = static_cast<int>((2LL * dims.width) / 3);
  return {MaskRegion{0, b1, 0, dims.height, Frame::original()},
          MaskRegion{b1, b2, 0, dims.height, Frame::original()},
          MaskRegion{b2, dims.width, 0, dims.height, Frame::original()}};
}

MaskRegion region_for_action(Action action, const ImageDims& dims) {
  return split_regions(dims)[static_cast<std::size_t>(action)];
}

MaskRegion intrusion_mask(Edge side, const ImageDims& dims, const GeometryConfig& cfg) {
  dims.validate();
  cfg.validate();
  const int r = cfg.pad_width;
  const int l = cfg.intrusion_half_width;
  if (r >= dims.width) {
    throw Error(ErrorCode::kConfiguration,
                "pad width r must be smaller than the image width");
  }
  if (side == Edge::kLeft) {
    return {r - l, r + l, 0, dims.height, Frame::padded(Edge::kLeft, r)};
  }
  return {dims.width - l, dims.width + l, 0, dims.height, Frame::padded(Edge::kRight, r)};
}

MaskRegion crop_after_pad(const ImageDims& original, const ImageDims& padded,
                          const PadSpec& pad) {
  original.validate();
  if (pad.pixels <= 0 || pad.pixels >= original.width) {
    throw Error(ErrorCode::kConfiguration, "pad must satisfy 0 < r < W");
  }
  const int expected = original.width + pad.pixels;
  if (padded.width != expected || padded.height != original.height) {
    throw Error(ErrorCode::kFrameMismatch,
                "padded canvas is " + dims_str(padded.width, padded.height) +
                    ", expected " + dims_str(expected, original.height));
  }
  const Frame frame = Frame::padded(pad.side, pad.pixels);
  if (pad.side == Edge::kLeft) {
    return {pad.pixels, expected, 0, original.height, frame};
  }
  return {0, original.width, 0, original.height, frame};
}

std::optional<MaskRegion> mask_after_crop(const MaskRegion& padded_mask,
                                          const ImageDims& original) {
  MaskRegion out = padded_mask;
  out.frame = Frame::original();
  switch (padded_mask.frame.kind) {
    case Frame::Kind::kOriginal:
      return padded_mask;
    case Frame::Kind::kPaddedLeft: {
      const int r = padded_mask.frame.pad;
      out.x_min = std::max(padded_mask.x_min, r) - r;
      out.x_max = std::min(padded_mask.x_max, original.width + r) - r;
      break;
    }
    case Frame::Kind::kPaddedRight:
      out.x_min = std::max(padded_mask.x_min, 0);
      out.x_max = std::min(padded_mask.x_max, original.width);
      break;
  }
  if (out.x_min >= out.x_max) return std::nullopt;
  return out;
}

MaskRegion distance_mask(const MaskRegion& gt_region, double vp_y,
                         const ImageDims& dims, const GeometryConfig& cfg) {
  dims.validate();
  gt_region.validate_within(dims.width, dims.height);
  if (!(cfg.distance_band > 0.0 && cfg.distance_band <= 1.0)) {
    throw Error(ErrorCode::kConfiguration, "distance band d must lie in (0, 1]");
  }
  if (!(vp_y >= 0.0 && vp_y < dims.height)) {
    throw Error(ErrorCode::kInvalidArgument, "vanishing-point y must be clamped into [0, H)");
  }
  const double band = cfg.distance_band * dims.height;
  const int lo = static_cast<int>(std::floor(vp_y - band + kSnap));
  const int hi = static_cast<int>(std::ceil(vp_y + band + 1.0 - kSnap));
  MaskRegion out = gt_region;
  out.y_min = std::max({0, lo, gt_region.y_min});
  out.y_max = std::min({dims.height, hi, gt_region.y_max});
  if (out.y_min >= out.y_max) {
    throw Error(ErrorCode::kInternal, "distance band does not intersect the region");
  }
  return out;
}

Raster crop_to_mask(const Raster& image, const MaskRegion& mask) {
  mask.validate_within(image.width, image.height);
  Raster out(mask.width(), mask.height(), image.channels);
  const int first_row = image.height - mask.y_max;
  const std::size_t row_bytes = static_cast<std::size_t>(mask.width()) * image.channels;
  for (int row = 0; row < out.height; ++row) {
    std::memcpy(out.px(0, row), image.px(mask.x_min, first_row + row), row_bytes);
  }
  return out;
}

Raster rasterize_mask(const MaskRegion& mask, int frame_width, int frame_height) {
  mask.validate_within(frame_width, frame_height);
  Raster out(frame_width, frame_height, 1, 0);
  for (int y = mask.y_min; y < mask.y_max; ++y) {
    std::uint8_t* row = out.px(0, raster_row(y, frame_height));
    std::fill(row + mask.x_min, row + mask.x_max, std::uint8_t{255});
  }
  return out;
}

Raster pad_raster(const Raster& image, const PadSpec& pad, std::uint8_t fill) {
  Raster out(image.width + pad.pixels, image.height, image.channels, fill);
  const int x0 = pad.side == Edge::kLeft ? pad.pixels : 0;
  const std::size_t row_bytes = static_cast<std::size_t>(image.width) * image.channels;
  for (int row = 0; row < image.height; ++row) {
    std::memcpy(out.px(x0, row), image.px(0, row), row_bytes);
  }
  return out;
}

std::string describe(const MaskRegion& m) {
  std::ostringstream os;
  os << "[" << m.x_min << "," << m.x_max << ")x[" << m.y_min << "," << m.y_max << ")";
  switch (m.frame.kind) {
    case Frame::Kind::kOriginal: break;
    case Frame::Kind::kPaddedLeft: os << "@padded-left(" << m.frame.pad << ")"; break;
    case Frame::Kind::kPaddedRight: os << "@padded-right(" << m.frame.pad << ")"; break;
  }
  return os.str();
}

}  // namespace hb
