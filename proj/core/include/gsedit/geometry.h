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

// Rigid poses, pinhole cameras and world <-> camera <-> image projection.
//
// Conventions used throughout the library:
//   * World frame is z-up. A heading (yaw) of zero faces world +x and
//     positive yaw turns counter-clockwise seen from above.
//   * Camera frame is +x right, +y down, +z forward (optical axis).
//   * Pixel (i, j) samples the image plane at u = i, v = j.
//   * Angles are radians; degrees only appear at the command-line boundary.

#ifndef GSEDIT_GEOMETRY_H_
#define GSEDIT_GEOMETRY_H_

#include <string>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "absl/status/statusor.h"

namespace gsedit {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

// Points closer than this (camera-space z) are culled or rejected.
inline constexpr double kNearPlane = 0.1;

// Tolerance for accepting a rotation matrix as orthonormal.
inline constexpr double kOrthonormalTolerance = 1e-9;

struct Pose {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static Pose Identity() { return Pose{}; }

  Vec3 Apply(const Vec3& p) const { return rotation * p + translation; }
};

// (R_a R_b, R_a t_b + t_a).
Pose Compose(const Pose& a, const Pose& b);
Pose Invert(const Pose& pose);

// Rotation about world +z by `yaw`, translated to `center`.
Pose YawPose(double yaw, const Vec3& center);

Mat3 YawRotation(double yaw);

bool IsOrthonormal(const Mat3& rotation,
                   double tolerance = kOrthonormalTolerance);

// Wraps an angle into (-pi, pi].
double WrapAngle(double angle);

// Quaternion given as (w, x, y, z). Norms within 1e-6 of one are accepted as
// is, up to 1e-3 are renormalized, anything further is an InvalidArgument.
absl::StatusOr<Eigen::Quaterniond> NormalizedQuaternion(
    const Eigen::Vector4d& wxyz);

struct CameraIntrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;

  absl::Status Validate() const;
};

struct CameraFrame {
  CameraIntrinsics intrinsics;
  Pose cam_to_world;
  int frame_index = 0;
  std::string camera_id;

  Vec3 OpticalCenter() const { return cam_to_world.translation; }
  absl::Status Validate() const;
};

struct PixelDepth {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;
};

// R_cw^T (p - t_cw).
Vec3 WorldToCamera(const Vec3& p, const CameraFrame& cam);
Vec3 CameraToWorld(const Vec3& p_cam, const CameraFrame& cam);

// Pinhole projection of a camera-space point. No near-plane check.
Vec2 ProjectCameraPoint(const Vec3& p_cam, const CameraIntrinsics& k);

// Returns BehindCamera when the camera-space depth is <= kNearPlane.
absl::StatusOr<PixelDepth> ProjectPoint(const Vec3& p_world,
                                        const CameraFrame& cam);

// Inverse of ProjectPoint for a known camera-space depth.
Vec3 Unproject(double u, double v, double depth, const CameraFrame& cam);

}  // namespace gsedit

#endif  // GSEDIT_GEOMETRY_H_
