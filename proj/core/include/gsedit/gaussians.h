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

// 3D Gaussian clouds: local-to-world placement, EWA projection to screen
// space splats, and front-to-back alpha compositing.
//
// A pixel's color is I(p) = sum_i c_i a_i prod_{j<i} (1 - a_j) over splats
// sorted by camera-space depth, with a_i = opacity_i * exp(-0.5 d^T S^-1 d).
// The alpha channel accumulates the same sum with c_i = 1. Colors are left
// premultiplied; compositing over a background is the caller's job.

#ifndef GSEDIT_GAUSSIANS_H_
#define GSEDIT_GAUSSIANS_H_

#include <optional>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gsedit/geometry.h"
#include "gsedit/image.h"

namespace gsedit {

struct Gaussian3D {
  Vec3 mean = Vec3::Zero();
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
  // Per-axis standard deviations in meters.
  Vec3 scale = Vec3::Ones();
  double opacity = 1.0;
  Vec3 color = Vec3::Zero();

  // R S S^T R^T.
  Mat3 Covariance() const;
  absl::Status Validate() const;
};

enum class CoordinateFrame { kLocal, kWorld };

struct GaussianCloud {
  std::vector<Gaussian3D> gaussians;
  CoordinateFrame frame = CoordinateFrame::kLocal;

  bool empty() const { return gaussians.empty(); }
  size_t size() const { return gaussians.size(); }
};

struct Splat2D {
  Vec2 center = Vec2::Zero();
  Mat2 cov2d = Mat2::Identity();
  double depth = 0.0;
  double opacity = 0.0;
  Vec3 color = Vec3::Zero();
};

struct RasterConfig {
  // Screen-space low-pass added to both covariance diagonal entries (px^2).
  double dilation = 0.3;
  // A splat covers the ellipse d^T S^-1 d <= cull_sigma^2; nothing outside.
  double cull_sigma = 3.0;
  double max_alpha = 0.99;
  double min_alpha = 1.0 / 255.0;
  // Per-pixel traversal stops once transmittance drops below this.
  double min_transmittance = 1e-4;
  int tile_size = 16;
  int num_threads = 1;
};

struct RenderedFrame {
  RgbImage rgb;        // 3 channels, premultiplied
  ScalarImage alpha;   // 1 channel
};

// mu_w = W mu + T; the rotation is updated so the world covariance equals
// W Sigma W^T. Errors: WrongFrame if `cloud` is already in world frame,
// InvalidArgument if `pose.rotation` is not a rotation.
absl::StatusOr<GaussianCloud> TransformCloud(const GaussianCloud& cloud,
                                             const Pose& pose);

// EWA projection. Returns nullopt (culled) when the mean is not beyond the
// near plane, when the cull_sigma ellipse misses every pixel center, or when
// the projected covariance is not positive definite.
std::optional<Splat2D> ProjectGaussian(const Gaussian3D& g,
                                       const CameraFrame& cam,
                                       double dilation = 0.3,
                                       double cull_sigma = 3.0);

// Tile-binned renderer, 16x16 tiles by default.
RenderedFrame Render(const GaussianCloud& cloud, const CameraFrame& cam,
                     const RasterConfig& config = {});

// Reference renderer: every pixel visits every projected splat. Kept as an
// oracle for Render.
RenderedFrame RenderNaive(const GaussianCloud& cloud, const CameraFrame& cam,
                          const RasterConfig& config = {});

// rgb + (1 - alpha) * 1.
RgbImage CompositeOverWhite(const RenderedFrame& frame);

}  // namespace gsedit

#endif  // GSEDIT_GAUSSIANS_H_
