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

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "core/error.hpp"

namespace hb {

namespace {

constexpr double kPi = std::numbers::pi;

double deg2rad(double d) { return d * kPi / 180.0; }

// Distance in radians between two undirected line angles.
double angle_gap(double a, double b) {
  double d = std::fmod(std::abs(a - b), kPi);
  return std::min(d, kPi - d);
}

bool in_excluded_band(double line_angle, double band) {
  // line_angle in [0, pi): horizontal at 0 and pi, vertical at pi/2.
  return line_angle < band || line_angle > kPi - band ||
         std::abs(line_angle - kPi / 2) < band;
}

struct EdgeMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> is_edge;
  std::vector<int> theta_bin;  // gradient-normal orientation bin per pixel
};

// Separable [1 4 6 4 1] / 16 binomial blur with clamped borders. Aliased
// edges otherwise bias Sobel orientations toward multiples of 45 degrees.
std::vector<float> smooth(const Raster& gray) {
  const int w = gray.width;
  const int h = gray.height;
  constexpr float k[5] = {1.f / 16, 4.f / 16, 6.f / 16, 4.f / 16, 1.f / 16};
  std::vector<float> tmp(static_cast<std::size_t>(w) * h);
  std::vector<float> out(tmp.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      float acc = 0;
      for (int i = -2; i <= 2; ++i) {
        acc += k[i + 2] * gray.pixels[static_cast<std::size_t>(y) * w + std::clamp(x + i, 0, w - 1)];
      }
      tmp[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      float acc = 0;
      for (int i = -2; i <= 2; ++i) {
        acc += k[i + 2] * tmp[static_cast<std::size_t>(std::clamp(y + i, 0, h - 1)) * w + x];
      }
      out[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  return out;
}

EdgeMap compute_edges(const Raster& gray, const VpParams& p, int theta_bins) {
  const int w = gray.width;
  const int h = gray.height;
  std::vector<float> mag(static_cast<std::size_t>(w) * h, 0.0f);
  std::vector<float> ang(mag.size(), 0.0f);
  const std::vector<float> blurred = smooth(gray);
  auto at = [&](int x, int y) { return blurred[static_cast<std::size_t>(y) * w + x]; };
  for (int y = 1; y + 1 < h; ++y) {
    for (int x = 1; x + 1 < w; ++x) {
      const float gx = (at(x + 1, y - 1) + 2 * at(x + 1, y) + at(x + 1, y + 1)) -
                       (at(x - 1, y - 1) + 2 * at(x - 1, y) + at(x - 1, y + 1));
      const float gy = (at(x - 1, y + 1) + 2 * at(x, y + 1) + at(x + 1, y + 1)) -
                       (at(x - 1, y - 1) + 2 * at(x, y - 1) + at(x + 1, y - 1));
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      mag[i] = std::sqrt(gx * gx + gy * gy);
      ang[i] = std::atan2(gy, gx);
    }
  }
  std::vector<float> sorted = mag;
  const std::size_t k = std::min(sorted.size() - 1,
                                 static_cast<std::size_t>(p.edge_percentile * sorted.size()));
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k), sorted.end());
  const float tau = sorted[k];

  EdgeMap em;
  em.width = w;
  em.height = h;
  em.is_edge.assign(mag.size(), 0);
  em.theta_bin.assign(mag.size(), 0);
  const double step = deg2rad(p.theta_step_deg);
  for (std::size_t i = 0; i < mag.size(); ++i) {
    if (mag[i] > tau && mag[i] > 0.0f) {
      em.is_edge[i] = 1;
      double t = std::fmod(static_cast<double>(ang[i]) + 2 * kPi, kPi);
      em.theta_bin[i] = static_cast<int>(std::lround(t / step)) % theta_bins;
    }
  }
  return em;
}

class Accumulator {
 public:
  Accumulator(int theta_bins, double step, int rho_max, std::vector<bool> allowed)
      : theta_bins_(theta_bins), rho_max_(rho_max), rho_bins_(2 * rho_max + 1),
        allowed_(std::move(allowed)), cells_(static_cast<std::size_t>(theta_bins) * rho_bins_, 0) {
    cos_.resize(theta_bins);
    sin_.resize(theta_bins);
    for (int t = 0; t < theta_bins; ++t) {
      cos_[t] = std::cos(t * step);
      sin_[t] = std::sin(t * step);
    }
  }

  template <typename Fn>
  void for_each_vote(int x, int y, int center_bin, int spread, Fn&& fn) const {
    for (int dt = -spread; dt <= spread; ++dt) {
      int t = (center_bin + dt + theta_bins_) % theta_bins_;
      if (!allowed_[t]) continue;
      const int rho = static_cast<int>(std::lround(x * cos_[t] + y * sin_[t]));
      fn(t, rho + rho_max_);
    }
  }

  int& cell(int t, int r) { return cells_[static_cast<std::size_t>(t) * rho_bins_ + r]; }

  // Global maximum; ties resolve to the lowest index.
  std::pair<int, int> peak(int* votes) const {
    auto it = std::max_element(cells_.begin(), cells_.end());
    const std::size_t idx = static_cast<std::size_t>(it - cells_.begin());
    *votes = *it;
    return {static_cast<int>(idx / rho_bins_), static_cast<int>(idx % rho_bins_)};
  }

  double cos_at(int t) const { return cos_[t]; }
  double sin_at(int t) const { return sin_[t]; }
  int rho_max() const { return rho_max_; }

 private:
  int theta_bins_;
  int rho_max_;
  int rho_bins_;
  std::vector<bool> allowed_;
  std::vector<int> cells_;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

// Total-least-squares fit through pixel centres; endpoints are the extreme
// projections. Coordinates are raster (x right, y down).
bool fit_segment(const std::vector<std::pair<int, int>>& pts, LineSegment* seg) {
  if (pts.size() < 2) return false;
  double mx = 0, my = 0;
  for (auto [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= pts.size();
  my /= pts.size();
  double sxx = 0, syy = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    syy += (y - my) * (y - my);
    sxy += (x - mx) * (y - my);
  }
  const double phi = 0.5 * std::atan2(2 * sxy, sxx - syy);
  const double dx = std::cos(phi);
  const double dy = std::sin(phi);
  double tmin = 1e300, tmax = -1e300;
  for (auto [x, y] : pts) {
    const double t = (x - mx) * dx + (y - my) * dy;
    tmin = std::min(tmin, t);
    tmax = std::max(tmax, t);
  }
  seg->a = {mx + tmin * dx, my + tmin * dy};
  seg->b = {mx + tmax * dx, my + tmax * dy};
  seg->length = tmax - tmin;
  return true;
}

std::vector<LineSegment> extract_segments(EdgeMap& em, const VpParams& p, double min_len) {
  const int theta_bins = static_cast<int>(std::lround(180.0 / p.theta_step_deg));
  const double step = deg2rad(p.theta_step_deg);
  const double band = deg2rad(p.excluded_band_deg);
  std::vector<bool> allowed(theta_bins);
  for (int t = 0; t < theta_bins; ++t) {
    // Bin t is the normal angle; the line direction is perpendicular.
    const double line_angle = std::fmod(t * step + kPi / 2, kPi);
    allowed[t] = !in_excluded_band(line_angle, band);
  }
  const int rho_max =
      static_cast<int>(std::ceil(std::hypot(em.width, em.height))) + 1;
  Accumulator acc(theta_bins, step, rho_max, allowed);

  const int w = em.width;
  const int h = em.height;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (!em.is_edge[i]) continue;
      acc.for_each_vote(x, y, em.theta_bin[i], p.theta_vote_spread,
                        [&](int t, int r) { ++acc.cell(t, r); });
    }
  }

  std::vector<std::uint8_t> consumed(em.is_edge.size(), 0);
  std::vector<LineSegment> segments;
  const double diag = std::hypot(w, h);

  for (int iter = 0; iter < p.max_lines; ++iter) {
    int votes = 0;
    auto [t, r] = acc.peak(&votes);
    if (votes < min_len) break;
    acc.cell(t, r) = 0;

    const double c = acc.cos_at(t);
    const double s = acc.sin_at(t);
    const double rho = r - acc.rho_max();
    const double px0 = rho * c, py0 = rho * s;
    const double dx = -s, dy = c;

    std::vector<std::pair<int, int>> run;
    double run_start = 0, last_hit = 0;
    bool in_run = false;

    auto close_run = [&]() {
      if (in_run && last_hit - run_start >= min_len) {
        LineSegment seg;
        if (fit_segment(run, &seg) && seg.length >= min_len) {
          for (auto [x, y] : run) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            consumed[i] = 1;
            acc.for_each_vote(x, y, em.theta_bin[i], p.theta_vote_spread,
                              [&](int tt, int rr) { --acc.cell(tt, rr); });
          }
          segments.push_back(seg);
        }
      }
      run.clear();
      in_run = false;
    };

    for (double tt = -diag; tt <= diag; tt += 1.0) {
      const double cx = px0 + tt * dx;
      const double cy = py0 + tt * dy;
      bool hit = false;
      for (int k = -1; k <= 1; ++k) {
        const int x = static_cast<int>(std::lround(cx + k * c));
        const int y = static_cast<int>(std::lround(cy + k * s));
        if (x < 0 || y < 0 || x >= w || y >= h) continue;
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        if (em.is_edge[i] && !consumed[i]) {
          if (run.empty() || run.back() != std::make_pair(x, y)) run.emplace_back(x, y);
          hit = true;
        }
      }
      if (hit) {
        if (!in_run) {
          in_run = true;
          run_start = tt;
        }
        last_hit = tt;
      } else if (in_run && tt - last_hit > p.max_gap_px) {
        close_run();
      }
    }
    close_run();
  }

  // Convert to the bottom-left frame and apply the orientation gate on the
  // fitted geometry.
  std::vector<LineSegment> kept;
  for (LineSegment seg : segments) {
    seg.a.y = (h - 1) - seg.a.y;
    seg.b.y = (h - 1) - seg.b.y;
    double a = std::atan2(seg.b.y - seg.a.y, seg.b.x - seg.a.x);
    a = std::fmod(a + 2 * kPi, kPi);
    seg.angle = a;
    if (seg.length < min_len || in_excluded_band(a, band)) continue;
    kept.push_back(seg);
  }
  return kept;
}

std::optional<Point2> intersect(const LineSegment& s1, const LineSegment& s2) {
  const double d1x = s1.b.x - s1.a.x, d1y = s1.b.y - s1.a.y;
  const double d2x = s2.b.x - s2.a.x, d2y = s2.b.y - s2.a.y;
  const double den = d1x * d2y - d1y * d2x;
  if (std::abs(den) < 1e-12) return std::nullopt;
  const double t = ((s2.a.x - s1.a.x) * d2y - (s2.a.y - s1.a.y) * d2x) / den;
  return Point2{s1.a.x + t * d1x, s1.a.y + t * d1y};
}

}  // namespace

std::optional<VPoint> detect_vp(const Raster& image, const VpParams& p,
                                VpDiagnostics* diagnostics) {
  if (image.width < 32 || image.height < 32) {
    throw Error(ErrorCode::kInvalidArgument, "vanishing-point detection needs at least 32x32");
  }
  const Raster gray = to_gray(image);
  const int w = gray.width;
  const int h = gray.height;
  const int theta_bins = static_cast<int>(std::lround(180.0 / p.theta_step_deg));
  EdgeMap em = compute_edges(gray, p, theta_bins);
  const double min_len = p.min_segment_fraction * std::min(w, h);
  const std::vector<LineSegment> segments = extract_segments(em, p, min_len);

  const double margin = p.outside_margin_fraction * std::max(w, h);
  const double min_pair = deg2rad(p.min_pair_angle_deg);
  std::vector<Point2> points;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    for (std::size_t j = i + 1; j < segments.size(); ++j) {
      if (angle_gap(segments[i].angle, segments[j].angle) < min_pair) continue;
      auto pt = intersect(segments[i], segments[j]);
      if (!pt) continue;
      if (pt->x < -margin || pt->x > w + margin || pt->y < -margin || pt->y > h + margin) {
        continue;
      }
      points.push_back(*pt);
    }
  }

  const double cw = static_cast<double>(w) / p.grid_divisions;
  const double ch = static_cast<double>(h) / p.grid_divisions;
  const double ox = -margin, oy = -margin;
  const int cols = static_cast<int>(std::ceil((w + 2 * margin) / cw)) + 1;
  const int rows = static_cast<int>(std::ceil((h + 2 * margin) / ch)) + 1;
  std::vector<int> votes(static_cast<std::size_t>(cols) * rows, 0);
  std::vector<int> cell_of(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const int cx = std::clamp(static_cast<int>((points[i].x - ox) / cw), 0, cols - 1);
    const int cy = std::clamp(static_cast<int>((points[i].y - oy) / ch), 0, rows - 1);
    cell_of[i] = cy * cols + cx;
    ++votes[cell_of[i]];
  }

  if (diagnostics) {
    diagnostics->segments = segments;
    diagnostics->cell_width = cw;
    diagnostics->cell_height = ch;
    diagnostics->grid_origin_x = ox;
    diagnostics->grid_origin_y = oy;
    diagnostics->grid_cols = cols;
    diagnostics->grid_rows = rows;
    diagnostics->votes = votes;
    diagnostics->total_intersections = static_cast<int>(points.size());
  }

  if (points.empty()) return std::nullopt;
  const auto best = std::max_element(votes.begin(), votes.end());
  const int support = *best;
  if (support < p.min_support) return std::nullopt;
  const int best_idx = static_cast<int>(best - votes.begin());
  const int bx = best_idx % cols, by = best_idx / cols;

  // Centroid over the winning cell and its 8 neighbours, so a cluster that
  // straddles a cell boundary is not biased toward one side.
  double sx = 0, sy = 0;
  int n = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const int cx = cell_of[i] % cols, cy = cell_of[i] / cols;
    if (std::abs(cx - bx) <= 1 && std::abs(cy - by) <= 1) {
      sx += points[i].x;
      sy += points[i].y;
      ++n;
    }
  }
  VPoint vp;
  vp.x = sx / n;
  vp.y = sy / n;
  vp.support = support;
  vp.confidence = static_cast<double>(support) / static_cast<double>(points.size());
  return vp;
}

VpEstimate resolve_vp_y(const std::optional<VPoint>& vp, int height) {
  VpEstimate est;
  est.vp = vp;
  if (vp) {
    est.y = std::clamp(vp->y, 0.0, static_cast<double>(height - 1));
  } else {
    est.fallback = true;
    est.y = static_cast<double>(std::lround(0.45 * height));
  }
  return est;
}

VpEstimate vp_y_or_fallback(const Raster& image, const VpParams& params,
                            VpDiagnostics* diagnostics) {
  std::optional<VPoint> vp;
  try {
    vp = detect_vp(image, params, diagnostics);
  } catch (const Error&) {
    vp.reset();
  }
  return resolve_vp_y(vp, image.height);
}

std::string VpDiagnostics::to_text() const {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "# segments " << segments.size() << "\n";
  os << "# x0 y0 x1 y1 angle_deg length\n";
  for (const auto& s : segments) {
    os << s.a.x << " " << s.a.y << " " << s.b.x << " " << s.b.y << " "
       << s.angle * 180.0 / kPi << " " << s.length << "\n";
  }
  os << "# grid cols=" << grid_cols << " rows=" << grid_rows << " cell=" << cell_width << "x"
     << cell_height << " origin=" << grid_origin_x << "," << grid_origin_y
     << " intersections=" << total_intersections << "\n";
  os << "# col row votes (nonzero cells)\n";
  for (int r = 0; r < grid_rows; ++r) {
    for (int c = 0; c < grid_cols; ++c) {
      const int v = votes[static_cast<std::size_t>(r) * grid_cols + c];
      if (v > 0) os << c << " " << r << " " << v << "\n";
    }
  }
  return os.str();
}

}  // namespace hb
