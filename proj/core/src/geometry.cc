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

#include "gsedit/geometry.h"

#include <cmath>
#include <numbers>

#include "absl/strings/str_cat.h"
#include "gsedit/status.h"

namespace gsedit {

Pose Compose(const Pose& a, const Pose& b) {
  return Pose{a.rotation * b.rotation, a.rotation * b.translation + a.translation};
}

Pose Invert(const Pose& pose) {
  const Mat3 rt = pose.rotation.transpose();
  return Pose{rt, -(rt * pose.translation)};
}

Mat3 YawRotation(double yaw) {
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  Mat3 r;
  r << c, -s, 0.0,  //
      s, c, 0.0,    //
      0.0, 0.0, 1.0;
  return r;
}

Pose YawPose(double yaw, const Vec3& center) {
  return Pose{YawRotation(yaw), center};
}

bool IsOrthonormal(const Mat3& rotation, double tolerance) {
  if (!rotation.allFinite()) return false;
  const Mat3 gram = rotation.transpose() * rotation;
  if ((gram - Mat3::Identity()).cwiseAbs().maxCoeff() > tolerance) return false;
  return std::abs(rotation.determinant() - 1.0) <= tolerance;
}

double WrapAngle(double angle) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double wrapped = std::fmod(angle, kTwoPi);
  if (wrapped <= -std::numbers::pi) wrapped += kTwoPi;
  if (wrapped > std::numbers::pi) wrapped -= kTwoPi;
  return wrapped;
}

absl::StatusOr<Eigen::Quaterniond> NormalizedQuaternion(
    const Eigen::Vector4d& wxyz) {
  if (!wxyz.allFinite()) {
    return MakeError(ErrorCode::kNonFiniteValue, "quaternion is not finite");
  }
  const double norm = wxyz.norm();
  if (std::abs(norm - 1.0) > 1e-3) {
    return MakeError(ErrorCode::kInvalidArgument,
                     absl::StrCat("quaternion norm ", norm,
                                  " deviates from 1 by more than 1e-3"));
  }
  Eigen::Quaterniond q(wxyz[0], wxyz[1], wxyz[2], wxyz[3]);
  if (std::abs(norm - 1.0) > 1e-6) q.normalize();
  return q;
}

absl::Status CameraIntrinsics::Validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) {
    return MakeError(ErrorCode::kInvalidArgument,
                     "focal lengths must be positive");
  }
  if (width <= 0 || height <= 0) {
    return MakeError(ErrorCode::kInvalidArgument,
                     "image size must be positive");
  }
  if (!(cx > 0.0 && cx < width) || !(cy > 0.0 && cy < height)) {
    return MakeError(ErrorCode::kInvalidArgument,
                     "principal point must lie inside the image");
  }
  return absl::OkStatus();
}

absl::Status CameraFrame::Validate() const {
  GSEDIT_RETURN_IF_ERROR(intrinsics.Validate());
  if (frame_index < 0) {
    return MakeError(ErrorCode::kInvalidArgument, "negative frame index");
  }
  if (camera_id.empty()) {
    return MakeError(ErrorCode::kInvalidArgument, "empty camera id");
  }
  if (!IsOrthonormal(cam_to_world.rotation) ||
      !cam_to_world.translation.allFinite()) {
    return MakeError(ErrorCode::kInvalidArgument,
                     absl::StrCat("cam_to_world of camera '", camera_id,
                                  "' frame ", frame_index,
                                  " is not a rigid transform"));
  }
  return absl::OkStatus();
}

Vec3 WorldToCamera(const Vec3& p, const CameraFrame& cam) {
  return cam.cam_to_world.rotation.transpose() *
         (p - cam.cam_to_world.translation);
}

Vec3 CameraToWorld(const Vec3& p_cam, const CameraFrame& cam) {
  return cam.cam_to_world.Apply(p_cam);
}

Vec2 ProjectCameraPoint(const Vec3& p_cam, const CameraIntrinsics& k) {
  return Vec2(k.fx * p_cam.x() / p_cam.z() + k.cx,
              k.fy * p_cam.y() / p_cam.z() + k.cy);
}

absl::StatusOr<PixelDepth> ProjectPoint(const Vec3& p_world,
                                        const CameraFrame& cam) {
  const Vec3 p = WorldToCamera(p_world, cam);
  if (p.z() <= kNearPlane) {
    return MakeError(ErrorCode::kBehindCamera,
                     absl::StrCat("camera-space depth ", p.z(),
                                  " is not beyond the near plane"));
  }
  const Vec2 uv = ProjectCameraPoint(p, cam.intrinsics);
  return PixelDepth{uv.x(), uv.y(), p.z()};
}

Vec3 Unproject(double u, double v, double depth, const CameraFrame& cam) {
  const CameraIntrinsics& k = cam.intrinsics;
  const Vec3 p_cam((u - k.cx) / k.fx * depth, (v - k.cy) / k.fy * depth, depth);
  return CameraToWorld(p_cam, cam);
}

}  // namespace gsedit
