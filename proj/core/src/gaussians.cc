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

#include "gsedit/gaussians.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "gsedit/parallel.h"
#include "gsedit/status.h"

namespace gsedit {
namespace {

// A projected splat with everything the per-pixel loop needs.
struct PreparedSplat {
  double cx, cy;
  // Inverse covariance [a b; b c].
  double conic_a, conic_b, conic_c;
  double opacity;
  Vec3 color;
  // Inclusive pixel bounds of the cull ellipse, padded by one pixel so that
  // rounding in the conic can never place a contributing pixel outside.
  int x0, y0, x1, y1;
};

struct PixelResult {
  double r = 0.0, g = 0.0, b = 0.0, a = 0.0;
};

std::vector<PreparedSplat> PrepareSplats(const GaussianCloud& cloud,
                                         const CameraFrame& cam,
                                         const RasterConfig& config) {
  struct Keyed {
    double depth;
    size_t index;
    Splat2D splat;
  };
  std::vector<Keyed> projected;
  projected.reserve(cloud.size());
  for (size_t i = 0; i < cloud.size(); ++i) {
    std::optional<Splat2D> s = ProjectGaussian(
        cloud.gaussians[i], cam, config.dilation, config.cull_sigma);
    if (s.has_value()) projected.push_back({s->depth, i, *s});
  }
  // Front to back; equal depths keep input order.
  std::stable_sort(projected.begin(), projected.end(),
                   [](const Keyed& a, const Keyed& b) { return a.depth < b.depth; });

  const int width = cam.intrinsics.width;
  const int height = cam.intrinsics.height;
  std::vector<PreparedSplat> out;
  out.reserve(projected.size());
  for (const Keyed& k : projected) {
    const Splat2D& s = k.splat;
    const double det = s.cov2d.determinant();
    const double rx = config.cull_sigma * std::sqrt(s.cov2d(0, 0));
    const double ry = config.cull_sigma * std::sqrt(s.cov2d(1, 1));
    PreparedSplat p;
    p.cx = s.center.x();
    p.cy = s.center.y();
    p.conic_a = s.cov2d(1, 1) / det;
    p.conic_b = -s.cov2d(0, 1) / det;
    p.conic_c = s.cov2d(0, 0) / det;
    p.opacity = s.opacity;
    p.color = s.color;
    p.x0 = std::max(0, static_cast<int>(std::floor(p.cx - rx)) - 1);
    p.y0 = std::max(0, static_cast<int>(std::floor(p.cy - ry)) - 1);
    p.x1 = std::min(width - 1, static_cast<int>(std::ceil(p.cx + rx)) + 1);
    p.y1 = std::min(height - 1, static_cast<int>(std::ceil(p.cy + ry)) + 1);
    if (p.x0 > p.x1 || p.y0 > p.y1) continue;
    out.push_back(p);
  }
  return out;
}

// Front-to-back blend of `splats` (already depth sorted) at pixel (x, y).
// Both renderers funnel through this so their arithmetic is identical.
template <typename SplatRange>
PixelResult BlendPixel(const SplatRange& splats, int x, int y,
                       const RasterConfig& config) {
  const double cutoff = config.cull_sigma * config.cull_sigma;
  PixelResult out;
  double transmittance = 1.0;
  for (const PreparedSplat& s : splats) {
    const double dx = x - s.cx;
    const double dy = y - s.cy;
    const double maha =
        s.conic_a * dx * dx + 2.0 * s.conic_b * dx * dy + s.conic_c * dy * dy;
    if (!(maha <= cutoff)) continue;
    const double alpha =
        std::min(config.max_alpha, s.opacity * std::exp(-0.5 * maha));
    if (alpha < config.min_alpha) continue;
    const double weight = alpha * transmittance;
    out.r += s.color.x() * weight;
    out.g += s.color.y() * weight;
    out.b += s.color.z() * weight;
    out.a += weight;
    transmittance *= 1.0 - alpha;
    if (transmittance < config.min_transmittance) break;
  }
  return out;
}

void StorePixel(RenderedFrame& frame, int x, int y, const PixelResult& p) {
  frame.rgb(x, y, 0) = std::clamp(p.r, 0.0, 1.0);
  frame.rgb(x, y, 1) = std::clamp(p.g, 0.0, 1.0);
  frame.rgb(x, y, 2) = std::clamp(p.b, 0.0, 1.0);
  frame.alpha(x, y) = std::clamp(p.a, 0.0, 1.0);
}

RenderedFrame BlankFrame(const CameraFrame& cam) {
  return RenderedFrame{
      RgbImage(cam.intrinsics.width, cam.intrinsics.height, 3, 0.0),
      ScalarImage(cam.intrinsics.width, cam.intrinsics.height, 1, 0.0)};
}

}  // namespace

Mat3 Gaussian3D::Covariance() const {
  const Mat3 r = rotation.normalized().toRotationMatrix();
  const Mat3 s = scale.asDiagonal();
  return r * s * s.transpose() * r.transpose();
}

absl::Status Gaussian3D::Validate() const {
  if (!mean.allFinite() || !scale.allFinite() || !color.allFinite() ||
      !rotation.coeffs().allFinite() || !std::isfinite(opacity)) {
    return MakeError(ErrorCode::kNonFiniteValue, "gaussian has non-finite fields");
  }
  if (std::abs(rotation.norm() - 1.0) > 1e-6) {
    return MakeError(ErrorCode::kInvalidArgument, "rotation is not a unit quaternion");
  }
  if ((scale.array() <= 0.0).any()) {
    return MakeError(ErrorCode::kDegenerateGaussian, "scale must be positive");
  }
  if (!(opacity > 0.0 && opacity <= 1.0)) {
    return MakeError(ErrorCode::kDegenerateGaussian, "opacity must lie in (0, 1]");
  }
  if ((color.array() < 0.0).any() || (color.array() > 1.0).any()) {
    return MakeError(ErrorCode::kInvalidArgument, "color must lie in [0, 1]");
  }
  return absl::OkStatus();
}

absl::StatusOr<GaussianCloud> TransformCloud(const GaussianCloud& cloud,
                                             const Pose& pose) {
  if (cloud.frame != CoordinateFrame::kLocal) {
    return MakeError(ErrorCode::kWrongFrame, "cloud is already in world frame");
  }
  if (!IsOrthonormal(pose.rotation)) {
    return MakeError(ErrorCode::kInvalidArgument,
                     "placement pose rotation is not orthonormal");
  }
  const Eigen::Quaterniond w(pose.rotation);
  GaussianCloud out;
  out.frame = CoordinateFrame::kWorld;
  out.gaussians.reserve(cloud.size());
  for (const Gaussian3D& g : cloud.gaussians) {
    Gaussian3D t = g;
    t.mean = pose.rotation * g.mean + pose.translation;
    // World covariance W R S S^T R^T W^T requires the rotation W R.
    t.rotation = (w * g.rotation).normalized();
    out.gaussians.push_back(t);
  }
  return out;
}

std::optional<Splat2D> ProjectGaussian(const Gaussian3D& g,
                                       const CameraFrame& cam, double dilation,
                                       double cull_sigma) {
  const Vec3 p = WorldToCamera(g.mean, cam);
  if (!p.allFinite() || p.z() <= kNearPlane) return std::nullopt;

  const CameraIntrinsics& k = cam.intrinsics;
  const Mat3& r_cw = cam.cam_to_world.rotation;
  const Mat3 cov_cam = r_cw.transpose() * g.Covariance() * r_cw;

  const double inv_z = 1.0 / p.z();
  Eigen::Matrix<double, 2, 3> jac;
  jac << k.fx * inv_z, 0.0, -k.fx * p.x() * inv_z * inv_z,  //
      0.0, k.fy * inv_z, -k.fy * p.y() * inv_z * inv_z;

  Mat2 cov2d = jac * cov_cam * jac.transpose();
  cov2d = 0.5 * (cov2d + cov2d.transpose()).eval();
  cov2d(0, 0) += dilation;
  cov2d(1, 1) += dilation;
  if (!cov2d.allFinite() || !(cov2d(0, 0) > 0.0) ||
      !(cov2d.determinant() > 0.0)) {
    return std::nullopt;
  }

  Splat2D s;
  s.center = ProjectCameraPoint(p, k);
  s.cov2d = cov2d;
  s.depth = p.z();
  s.opacity = g.opacity;
  s.color = g.color;

  const double rx = cull_sigma * std::sqrt(cov2d(0, 0));
  const double ry = cull_sigma * std::sqrt(cov2d(1, 1));
  if (s.center.x() + rx < 0.0 || s.center.x() - rx > k.width - 1 ||
      s.center.y() + ry < 0.0 || s.center.y() - ry > k.height - 1) {
    return std::nullopt;
  }
  return s;
}

RenderedFrame Render(const GaussianCloud& cloud, const CameraFrame& cam,
                     const RasterConfig& config) {
  RenderedFrame frame = BlankFrame(cam);
  const std::vector<PreparedSplat> splats = PrepareSplats(cloud, cam, config);
  if (splats.empty()) return frame;

  const int width = cam.intrinsics.width;
  const int height = cam.intrinsics.height;
  const int tile = std::max(1, config.tile_size);
  const int tiles_x = (width + tile - 1) / tile;
  const int tiles_y = (height + tile - 1) / tile;

  // Per-tile splat lists; appending in sorted order keeps each list sorted.
  std::vector<std::vector<const PreparedSplat*>> bins(
      static_cast<size_t>(tiles_x) * tiles_y);
  for (const PreparedSplat& s : splats) {
    for (int ty = s.y0 / tile; ty <= s.y1 / tile; ++ty) {
      for (int tx = s.x0 / tile; tx <= s.x1 / tile; ++tx) {
        bins[static_cast<size_t>(ty) * tiles_x + tx].push_back(&s);
      }
    }
  }

  struct DerefRange {
    const std::vector<const PreparedSplat*>& v;
    struct It {
      std::vector<const PreparedSplat*>::const_iterator it;
      const PreparedSplat& operator*() const { return **it; }
      It& operator++() {
        ++it;
        return *this;
      }
      bool operator!=(const It& o) const { return it != o.it; }
    };
    It begin() const { return {v.begin()}; }
    It end() const { return {v.end()}; }
  };

  ParallelFor(bins.size(), config.num_threads, [&](size_t b) {
    const auto& bin = bins[b];
    if (bin.empty()) return;
    const int tx = static_cast<int>(b % tiles_x);
    const int ty = static_cast<int>(b / tiles_x);
    const DerefRange range{bin};
    for (int y = ty * tile; y < std::min(height, (ty + 1) * tile); ++y) {
      for (int x = tx * tile; x < std::min(width, (tx + 1) * tile); ++x) {
        StorePixel(frame, x, y, BlendPixel(range, x, y, config));
      }
    }
  });
  return frame;
}

RenderedFrame RenderNaive(const GaussianCloud& cloud, const CameraFrame& cam,
                          const RasterConfig& config) {
  RenderedFrame frame = BlankFrame(cam);
  const std::vector<PreparedSplat> splats = PrepareSplats(cloud, cam, config);
  for (int y = 0; y < cam.intrinsics.height; ++y) {
    for (int x = 0; x < cam.intrinsics.width; ++x) {
      StorePixel(frame, x, y, BlendPixel(splats, x, y, config));
    }
  }
  return frame;
}

RgbImage CompositeOverWhite(const RenderedFrame& frame) {
  RgbImage out = frame.rgb;
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      const double background = 1.0 - frame.alpha(x, y);
      for (int c = 0; c < 3; ++c) {
        out(x, y, c) = std::clamp(out(x, y, c) + background, 0.0, 1.0);
      }
    }
  }
  return out;
}

}  // namespace gsedit
