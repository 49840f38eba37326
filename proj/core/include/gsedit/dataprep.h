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

// Training-data preparation: inpainting masks, masked frames, reference
// crops, object-free random masks and reference augmentation.

#ifndef GSEDIT_DATAPREP_H_
#define GSEDIT_DATAPREP_H_

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gsedit/geometry.h"
#include "gsedit/image.h"
#include "gsedit/layout.h"

namespace gsedit {

// Seeded generator. Draws are derived from raw 64-bit engine output so that
// sequences are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double Uniform();
  // Uniform in [lo, hi]; exactly lo when lo == hi.
  double Uniform(double lo, double hi);
  // Uniform integer in [lo, hi].
  int UniformInt(int lo, int hi);
  bool Bernoulli(double p);

 private:
  std::mt19937_64 engine_;
};

// Mixes a base seed with a stream index (splitmix64 finalizer).
uint64_t DeriveSeed(uint64_t seed, uint64_t stream);

struct MaskPadding {
  double pad_frac = 0.1;
  double min_pad_px = 8.0;
};

// Pixel-inclusive integer rectangle.
struct IntRect {
  int x0 = 0, y0 = 0, x1 = -1, y1 = -1;

  int width() const { return x1 - x0 + 1; }
  int height() const { return y1 - y0 + 1; }
  bool empty() const { return x1 < x0 || y1 < y0; }
  friend bool operator==(const IntRect&, const IntRect&) = default;
};

// Sets every pixel whose center lies inside `rect` (clipped to the image).
Mask RectMask(int width, int height, const PixelRect& rect);

// Projected box rectangle grown by max(pad_frac * side, min_pad_px) on each
// side, clipped and filled. FullyBehindCamera if no part of the box is
// beyond the near plane.
absl::StatusOr<Mask> MakeMask(const Box3D& box, const CameraFrame& cam,
                              const MaskPadding& padding = {});

// Pixels under the mask become 0.5; others are untouched.
absl::StatusOr<RgbImage> GrayOut(const RgbImage& frame, const Mask& mask);

// The frame of `clip_frames` farthest from `target_frame`; ties go to the
// earlier frame. Requires a nonempty clip containing the target.
int PickReferenceFrame(std::span<const int> clip_frames, int target_frame);

struct SquareCrop {
  int x = 0, y = 0, side = 0;
  friend bool operator==(const SquareCrop&, const SquareCrop&) = default;
};

// Square window around `rect` (side = ceil of the longer side, at least 1),
// centered on it and shifted to lie inside the image. CropExceedsImage when
// the side exceeds min(width, height).
absl::StatusOr<SquareCrop> SquareAround(const PixelRect& rect, int width,
                                        int height);

RgbImage ExtractCrop(const RgbImage& frame, const SquareCrop& crop);

// Reference window: all 8 corners must project inside the image and beyond
// the near plane (NotFullyVisible otherwise).
absl::StatusOr<SquareCrop> ReferenceCropWindow(const Box3D& box,
                                               const CameraFrame& cam);
absl::StatusOr<RgbImage> CropReference(const RgbImage& frame,
                                       const Box3D& box,
                                       const CameraFrame& cam);

// Up to 50 rectangles with sides uniform in [64, 256] px are drawn; the first
// whose pixel extent is disjoint from every projected object rectangle in the
// frame wins. NoFreeRegion after 50 misses.
absl::StatusOr<IntRect> RandomObjectFreeRect(const SceneLayout& layout,
                                             int frame,
                                             std::string_view camera_id,
                                             Rng& rng);
absl::StatusOr<Mask> RandomObjectFreeMask(const SceneLayout& layout, int frame,
                                          std::string_view camera_id,
                                          Rng& rng);

struct AugmentParams {
  double brightness_lo = 0.8, brightness_hi = 1.2;
  double contrast_lo = 0.8, contrast_hi = 1.2;
  double saturation_lo = 0.8, saturation_hi = 1.2;
  double flip_probability = 0.5;

  static AugmentParams Identity() { return {1, 1, 1, 1, 1, 1, 0.0}; }
  absl::Status Validate() const;
};

// Flip (with flip_probability), then brightness x*b, contrast
// c*x + (1-c)*mean, saturation s*x + (1-s)*luma (Rec.601), clamped to [0, 1].
// Always consumes four draws from `rng`.
RgbImage AugmentReference(const RgbImage& img, const AugmentParams& params,
                          Rng& rng);

// Bilinear resize with corner-aligned sampling: output corners map exactly
// onto input corners.
RgbImage ResizeBilinear(const RgbImage& img, int width, int height);

}  // namespace gsedit

#endif  // GSEDIT_DATAPREP_H_
