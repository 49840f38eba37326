/* Copyright 2026 The gsedit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "gsedit/dataprep.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "absl/strings/str_cat.h"
#include "gsedit/status.h"
#include "string_compat.h"

namespace gsedit {

double Rng::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::Uniform(double lo, double hi) {
  const double u = Uniform();
  return lo + (hi - lo) * u;
}

int Rng::UniformInt(int lo, int hi) {
  if (hi <= lo) {
    engine_();
    return lo;
  }
  const uint64_t span = static_cast<uint64_t>(hi) - static_cast<uint64_t>(lo) + 1;
  // Multiply-shift mapping of the top 32 bits; bias is below 2^-32 * span.
  const uint64_t r = engine_() >> 32;
  return lo + static_cast<int>((r * span) >> 32);
}

bool Rng::Bernoulli(double p) { return Uniform() < p; }

uint64_t DeriveSeed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Mask RectMask(int width, int height, const PixelRect& rect) {
  Mask mask(width, height, 1, 0);
  if (rect.empty()) return mask;
  const int x0 = std::max(0, static_cast<int>(std::ceil(rect.x0)));
  const int y0 = std::max(0, static_cast<int>(std::ceil(rect.y0)));
  const int x1 = std::min(width - 1, static_cast<int>(std::floor(rect.x1)));
  const int y1 = std::min(height - 1, static_cast<int>(std::floor(rect.y1)));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) mask(x, y) = 1;
  }
  return mask;
}

absl::StatusOr<Mask> MakeMask(const Box3D& box, const CameraFrame& cam,
                              const MaskPadding& padding) {
  const std::optional<PixelRect> rect = ProjectedBoxRect(box, cam);
  if (!rect.has_value()) {
    return MakeError(ErrorCode::kFullyBehindCamera,
                     "box lies entirely behind the near plane");
  }
  const double pad_x = std::max(padding.pad_frac * rect->width(), padding.min_pad_px);
  const double pad_y = std::max(padding.pad_frac * rect->height(), padding.min_pad_px);
  const PixelRect grown{rect->x0 - pad_x, rect->y0 - pad_y, rect->x1 + pad_x,
                        rect->y1 + pad_y};
  return RectMask(cam.intrinsics.width, cam.intrinsics.height, grown);
}

absl::StatusOr<RgbImage> GrayOut(const RgbImage& frame, const Mask& mask) {
  if (!frame.SameExtent(mask) || frame.channels() != 3 || mask.channels() != 1) {
    return MakeError(ErrorCode::kShapeMismatch,
                     absl::StrCat("frame ", frame.width(), "x", frame.height(),
                                  " vs mask ", mask.width(), "x", mask.height()));
  }
  RgbImage out = frame;
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      if (mask(x, y) == 0) continue;
      for (int c = 0; c < 3; ++c) out(x, y, c) = 0.5;
    }
  }
  return out;
}

int PickReferenceFrame(std::span<const int> clip_frames, int target_frame) {
  int best = target_frame;
  int best_distance = -1;
  for (int f : clip_frames) {
    const int d = std::abs(f - target_frame);
    if (d > best_distance || (d == best_distance && f < best)) {
      best = f;
      best_distance = d;
    }
  }
  return best;
}

absl::StatusOr<SquareCrop> SquareAround(const PixelRect& rect, int width,
                                        int height) {
  const int side = std::max(
      1, static_cast<int>(std::ceil(std::max(rect.width(), rect.height()) - 1e-9)));
  if (side > std::min(width, height)) {
    return MakeError(ErrorCode::kCropExceedsImage,
                     absl::StrCat("square side ", side, " exceeds image ", width,
                                  "x", height));
  }
  const double cx = 0.5 * (rect.x0 + rect.x1);
  const double cy = 0.5 * (rect.y0 + rect.y1);
  int x = static_cast<int>(std::lround(cx - 0.5 * side));
  int y = static_cast<int>(std::lround(cy - 0.5 * side));
  x = std::clamp(x, 0, width - side);
  y = std::clamp(y, 0, height - side);
  return SquareCrop{x, y, side};
}

RgbImage ExtractCrop(const RgbImage& frame, const SquareCrop& crop) {
  RgbImage out(crop.side, crop.side, frame.channels());
  for (int y = 0; y < crop.side; ++y) {
    for (int x = 0; x < crop.side; ++x) {
      for (int c = 0; c < frame.channels(); ++c) {
        out(x, y, c) = frame(crop.x + x, crop.y + y, c);
      }
    }
  }
  return out;
}

absl::StatusOr<SquareCrop> ReferenceCropWindow(const Box3D& box,
                                               const CameraFrame& cam) {
  const CameraIntrinsics& k = cam.intrinsics;
  PixelRect rect{HUGE_VAL, HUGE_VAL, -HUGE_VAL, -HUGE_VAL};
  for (const Vec3& corner : BoxCorners(box)) {
    auto p = ProjectPoint(corner, cam);
    if (!p.ok() || p->u < 0.0 || p->u > k.width - 1 || p->v < 0.0 ||
        p->v > k.height - 1) {
      return MakeError(ErrorCode::kNotFullyVisible,
                       "a box corner projects outside the image");
    }
    rect.x0 = std::min(rect.x0, p->u);
    rect.y0 = std::min(rect.y0, p->v);
    rect.x1 = std::max(rect.x1, p->u);
    rect.y1 = std::max(rect.y1, p->v);
  }
  return SquareAround(rect, k.width, k.height);
}

absl::StatusOr<RgbImage> CropReference(const RgbImage& frame, const Box3D& box,
                                       const CameraFrame& cam) {
  if (frame.width() != cam.intrinsics.width ||
      frame.height() != cam.intrinsics.height) {
    return MakeError(ErrorCode::kShapeMismatch, "frame does not match camera");
  }
  GSEDIT_ASSIGN_OR_RETURN(const SquareCrop crop, ReferenceCropWindow(box, cam));
  return ExtractCrop(frame, crop);
}

absl::StatusOr<IntRect> RandomObjectFreeRect(const SceneLayout& layout,
                                             int frame,
                                             std::string_view camera_id,
                                             Rng& rng) {
  GSEDIT_ASSIGN_OR_RETURN(const CameraFrame* cam, layout.Camera(frame, camera_id));
  const int width = cam->intrinsics.width;
  const int height = cam->intrinsics.height;
  std::vector<PixelRect> occupied;
  for (const ObjectTrack& t : layout.tracks) {
    const Box3D* box = t.BoxAt(frame);
    if (box == nullptr) continue;
    auto rect = ProjectedBoxRect(*box, *cam);
    if (!rect) continue;
    auto clipped = ClipToImage(*rect, width, height);
    if (clipped) occupied.push_back(*clipped);
  }
  constexpr int kAttempts = 50;
  constexpr int kMinSide = 64;
  constexpr int kMaxSide = 256;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    const int w = std::min(width, rng.UniformInt(kMinSide, kMaxSide));
    const int h = std::min(height, rng.UniformInt(kMinSide, kMaxSide));
    const int x0 = rng.UniformInt(0, width - w);
    const int y0 = rng.UniformInt(0, height - h);
    const IntRect candidate{x0, y0, x0 + w - 1, y0 + h - 1};
    bool free = true;
    for (const PixelRect& o : occupied) {
      // Closed pixel-center intervals; touching counts as overlap.
      if (candidate.x0 <= o.x1 && o.x0 <= candidate.x1 && candidate.y0 <= o.y1 &&
          o.y0 <= candidate.y1) {
        free = false;
        break;
      }
    }
    if (free) return candidate;
  }
  return MakeError(ErrorCode::kNoFreeRegion,
                   absl::StrCat("no object-free rectangle after ", kAttempts,
                                " attempts"));
}

absl::StatusOr<Mask> RandomObjectFreeMask(const SceneLayout& layout, int frame,
                                          std::string_view camera_id,
                                          Rng& rng) {
  GSEDIT_ASSIGN_OR_RETURN(const IntRect r,
                          RandomObjectFreeRect(layout, frame, camera_id, rng));
  GSEDIT_ASSIGN_OR_RETURN(const CameraFrame* cam, layout.Camera(frame, camera_id));
  return RectMask(cam->intrinsics.width, cam->intrinsics.height,
                  PixelRect{static_cast<double>(r.x0), static_cast<double>(r.y0),
                            static_cast<double>(r.x1), static_cast<double>(r.y1)});
}

absl::Status AugmentParams::Validate() const {
  auto check = [](double lo, double hi, std::string_view name) -> absl::Status {
    if (!(lo > 0.0 && lo <= hi)) {
      return MakeError(ErrorCode::kInvalidArgument,
                       absl::StrCat(Sv(name), " range must satisfy 0 < lo <= hi"));
    }
    return absl::OkStatus();
  };
  GSEDIT_RETURN_IF_ERROR(check(brightness_lo, brightness_hi, "brightness"));
  GSEDIT_RETURN_IF_ERROR(check(contrast_lo, contrast_hi, "contrast"));
  GSEDIT_RETURN_IF_ERROR(check(saturation_lo, saturation_hi, "saturation"));
  if (!(flip_probability >= 0.0 && flip_probability <= 1.0)) {
    return MakeError(ErrorCode::kInvalidArgument,
                     "flip_probability must lie in [0, 1]");
  }
  return absl::OkStatus();
}

RgbImage AugmentReference(const RgbImage& img, const AugmentParams& params,
                          Rng& rng) {
  const bool flip = rng.Bernoulli(params.flip_probability);
  const double b = rng.Uniform(params.brightness_lo, params.brightness_hi);
  const double c = rng.Uniform(params.contrast_lo, params.contrast_hi);
  const double s = rng.Uniform(params.saturation_lo, params.saturation_hi);

  const int w = img.width();
  const int h = img.height();
  RgbImage out(w, h, 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int sx = flip ? w - 1 - x : x;
      for (int ch = 0; ch < 3; ++ch) out(x, y, ch) = img(sx, y, ch) * b;
    }
  }
  if (!out.empty()) {
    double sum = 0.0;
    for (double v : out.data()) sum += v;
    const double mean = sum / static_cast<double>(out.size());
    for (double& v : out.data()) v = c * v + (1.0 - c) * mean;
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double luma =
          0.299 * out(x, y, 0) + 0.587 * out(x, y, 1) + 0.114 * out(x, y, 2);
      for (int ch = 0; ch < 3; ++ch) {
        out(x, y, ch) = std::clamp(s * out(x, y, ch) + (1.0 - s) * luma, 0.0, 1.0);
      }
    }
  }
  return out;
}

RgbImage ResizeBilinear(const RgbImage& img, int width, int height) {
  RgbImage out(width, height, img.channels());
  if (img.empty() || width <= 0 || height <= 0) return out;
  const double sx = width > 1 ? static_cast<double>(img.width() - 1) / (width - 1) : 0.0;
  const double sy = height > 1 ? static_cast<double>(img.height() - 1) / (height - 1) : 0.0;
  for (int y = 0; y < height; ++y) {
    const double fy = y * sy;
    const int y0 = std::min(static_cast<int>(fy), img.height() - 1);
    const int y1 = std::min(y0 + 1, img.height() - 1);
    const double ty = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = x * sx;
      const int x0 = std::min(static_cast<int>(fx), img.width() - 1);
      const int x1 = std::min(x0 + 1, img.width() - 1);
      const double tx = fx - x0;
      for (int c = 0; c < img.channels(); ++c) {
        const double top = img(x0, y0, c) + tx * (img(x1, y0, c) - img(x0, y0, c));
        const double bottom =
            img(x0, y1, c) + tx * (img(x1, y1, c) - img(x0, y1, c));
        out(x, y, c) = top + ty * (bottom - top);
      }
    }
  }
  return out;
}

}  // namespace gsedit
