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

#ifndef HAZARDBENCH_CORE_RASTER_HPP_
#define HAZARDBENCH_CORE_RASTER_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hb {

using PngBytes = std::vector<std::uint8_t>;

// 8-bit interleaved image, top-left origin, row-major. Geometry code works in
// a bottom-left frame; conversion happens only where masks meet rasters.
struct Raster {
  int width = 0;
  int height = 0;
  int channels = 3;
  std::vector<std::uint8_t> pixels;

  Raster() = default;
  Raster(int w, int h, int c, std::uint8_t fill = 0)
      : width(w), height(h), channels(c),
        pixels(static_cast<std::size_t>(w) * h * c, fill) {}

  std::size_t offset(int col, int row) const {
    return (static_cast<std::size_t>(row) * width + col) * channels;
  }
  std::uint8_t* px(int col, int row) { return pixels.data() + offset(col, row); }
  const std::uint8_t* px(int col, int row) const {
    return pixels.data() + offset(col, row);
  }
  bool empty() const { return pixels.empty(); }

  friend bool operator==(const Raster&, const Raster&) = default;
};

// Raster row holding the bottom-left-frame pixel row `y`.
constexpr int raster_row(int y, int height) { return height - 1 - y; }

PngBytes encode_png(const Raster& image);
// Always yields 1 (gray) or 3 (RGB) channels; alpha is dropped.
Raster decode_png(std::span<const std::uint8_t> png);
Raster to_rgb(const Raster& image);
Raster to_gray(const Raster& image);

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);

std::vector<std::uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, std::span<const std::uint8_t> bytes);
// Writes through a sibling temp file and rename.
void write_file_atomic(const std::string& path, std::string_view contents);

}  // namespace hb

#endif  // HAZARDBENCH_CORE_RASTER_HPP_
