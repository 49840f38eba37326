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

#include "gsedit/layout.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "absl/strings/str_cat.h"
#include "gsedit/status.h"
#include "string_compat.h"

namespace gsedit {
namespace {

struct ScreenVertex {
  double u, v, depth;
};

double EdgeFunction(const ScreenVertex& a, const ScreenVertex& b, double px,
                    double py) {
  return (b.u - a.u) * (py - a.v) - (b.v - a.v) * (px - a.u);
}

// Screen-space barycentric rasterization keeping the minimum depth per pixel.
// Inverse depth is affine in screen space for a planar face, so interpolating
// it reproduces the face's exact camera-space depth.
void RasterizeTriangle(const ScreenVertex& a, const ScreenVertex& b,
                       const ScreenVertex& c, ScalarImage& zbuffer) {
  const double area = EdgeFunction(a, b, c.u, c.v);
  if (!(std::abs(area) > 1e-12)) return;
  const double min_u = std::min({a.u, b.u, c.u});
  const double max_u = std::max({a.u, b.u, c.u});
  const double min_v = std::min({a.v, b.v, c.v});
  const double max_v = std::max({a.v, b.v, c.v});
  const int x0 = std::max(0, static_cast<int>(std::ceil(min_u)));
  const int x1 = std::min(zbuffer.width() - 1, static_cast<int>(std::floor(max_u)));
  const int y0 = std::max(0, static_cast<int>(std::ceil(min_v)));
  const int y1 = std::min(zbuffer.height() - 1, static_cast<int>(std::floor(max_v)));
  constexpr double kInsideEps = -1e-9;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double w0 = EdgeFunction(b, c, x, y) / area;
      const double w1 = EdgeFunction(c, a, x, y) / area;
      const double w2 = EdgeFunction(a, b, x, y) / area;
      if (w0 < kInsideEps || w1 < kInsideEps || w2 < kInsideEps) continue;
      const double inv = w0 / a.depth + w1 / b.depth + w2 / c.depth;
      if (!(inv > 0.0)) continue;
      const double depth = 1.0 / inv;
      double& z = zbuffer(x, y);
      if (z == 0.0 || depth < z) z = depth;
    }
  }
}

// Clips the camera-space segment [a, b] to z >= kNearPlane.
bool ClipSegmentToNearPlane(Vec3& a, Vec3& b) {
  const bool a_in = a.z() >= kNearPlane;
  const bool b_in = b.z() >= kNearPlane;
  if (!a_in && !b_in) return false;
  if (a_in && b_in) return true;
  const double t = (kNearPlane - a.z()) / (b.z() - a.z());
  const Vec3 hit = a + t * (b - a);
  if (a_in) {
    b = hit;
    b.z() = kNearPlane;
  } else {
    a = hit;
    a.z() = kNearPlane;
  }
  return true;
}

void DrawThickSegment(const Vec2& a, const Vec2& b, double radius, Mask& mask) {
  const double min_x = std::min(a.x(), b.x()) - radius;
  const double max_x = std::max(a.x(), b.x()) + radius;
  const double min_y = std::min(a.y(), b.y()) - radius;
  const double max_y = std::max(a.y(), b.y()) + radius;
  if (max_x < 0 || max_y < 0 || min_x > mask.width() - 1 ||
      min_y > mask.height() - 1) {
    return;
  }
  const int x0 = std::max(0, static_cast<int>(std::ceil(min_x)));
  const int x1 = std::min(mask.width() - 1, static_cast<int>(std::floor(max_x)));
  const int y0 = std::max(0, static_cast<int>(std::ceil(min_y)));
  const int y1 = std::min(mask.height() - 1, static_cast<int>(std::floor(max_y)));
  const Vec2 d = b - a;
  const double len2 = d.squaredNorm();
  const double r2 = radius * radius;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const Vec2 p(x, y);
      double t = len2 > 0.0 ? (p - a).dot(d) / len2 : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      if ((p - (a + t * d)).squaredNorm() <= r2) mask(x, y) = 1;
    }
  }
}

}  // namespace

std::string_view ObjectClassName(ObjectClass c) {
  switch (c) {
    case ObjectClass::kVehicle:
      return "vehicle";
    case ObjectClass::kPedestrian:
      return "pedestrian";
    case ObjectClass::kCyclist:
      return "cyclist";
    case ObjectClass::kOther:
      return "other";
  }
  return "other";
}

absl::StatusOr<ObjectClass> ParseObjectClass(std::string_view name) {
  for (ObjectClass c : {ObjectClass::kVehicle, ObjectClass::kPedestrian,
                        ObjectClass::kCyclist, ObjectClass::kOther}) {
    if (ObjectClassName(c) == name) return c;
  }
  return MakeError(ErrorCode::kParseError,
                   absl::StrCat("unknown object class '", Sv(name), "'"));
}

absl::Status Box3D::Validate() const {
  if (!center.allFinite() || !dims.allFinite() || !std::isfinite(yaw)) {
    return MakeError(ErrorCode::kNonFiniteValue, "box has non-finite fields");
  }
  if ((dims.array() <= 0.0).any()) {
    return MakeError(ErrorCode::kInvalidArgument, "box dims must be positive");
  }
  if (!(yaw > -std::numbers::pi && yaw <= std::numbers::pi)) {
    return MakeError(ErrorCode::kInvalidArgument, "box yaw not in (-pi, pi]");
  }
  return absl::OkStatus();
}

absl::StatusOr<const CameraFrame*> SceneLayout::Camera(
    int frame, std::string_view camera_id) const {
  auto it = cameras.find(CameraKey(frame, std::string(camera_id)));
  if (it == cameras.end()) {
    return MakeError(ErrorCode::kMissingCamera,
                     absl::StrCat("no camera '", Sv(camera_id), "' at frame ", frame));
  }
  return &it->second;
}

const ObjectTrack* SceneLayout::FindTrack(std::string_view object_id) const {
  for (const ObjectTrack& t : tracks) {
    if (t.object_id == object_id) return &t;
  }
  return nullptr;
}

std::vector<std::string> SceneLayout::CameraIds() const {
  std::vector<std::string> ids;
  for (const auto& [key, cam] : cameras) {
    if (std::find(ids.begin(), ids.end(), key.second) == ids.end()) {
      ids.push_back(key.second);
    }
  }
  return ids;
}

absl::Status SceneLayout::Validate() const {
  if (num_frames < 0) {
    return MakeError(ErrorCode::kInvalidArgument, "negative num_frames");
  }
  std::set<int> camera_frames;
  for (const auto& [key, cam] : cameras) {
    if (key.first != cam.frame_index || key.second != cam.camera_id) {
      return MakeError(ErrorCode::kInvalidArgument, "camera key mismatch");
    }
    if (key.first >= num_frames) {
      return MakeError(ErrorCode::kInvalidArgument,
                       absl::StrCat("camera frame ", key.first,
                                    " beyond num_frames ", num_frames));
    }
    GSEDIT_RETURN_IF_ERROR(cam.Validate());
    camera_frames.insert(key.first);
  }
  std::set<std::string> ids;
  for (const ObjectTrack& t : tracks) {
    if (t.object_id.empty()) {
      return MakeError(ErrorCode::kInvalidArgument, "empty object id");
    }
    if (!ids.insert(t.object_id).second) {
      return MakeError(ErrorCode::kDuplicateObjectId,
                       absl::StrCat("duplicate object id '", t.object_id, "'"));
    }
    for (const auto& [frame, box] : t.boxes) {
      if (frame < 0 || frame >= num_frames) {
        return MakeError(ErrorCode::kInvalidArgument,
                         absl::StrCat("track '", t.object_id, "' frame ", frame,
                                      " outside [0, ", num_frames, ")"));
      }
      if (!camera_frames.contains(frame)) {
        return MakeError(ErrorCode::kMissingCamera,
                         absl::StrCat("frame ", frame, " has no camera"));
      }
      GSEDIT_RETURN_IF_ERROR(box.Validate());
    }
  }
  return absl::OkStatus();
}

std::array<Vec3, 8> BoxCorners(const Box3D& box) {
  const double hl = 0.5 * box.dims.x();
  const double hw = 0.5 * box.dims.y();
  const double hh = 0.5 * box.dims.z();
  static constexpr double kSignX[4] = {1, -1, -1, 1};
  static constexpr double kSignY[4] = {1, 1, -1, -1};
  const Mat3 r = YawRotation(box.yaw);
  std::array<Vec3, 8> corners;
  for (int level = 0; level < 2; ++level) {
    const double z = level == 0 ? -hh : hh;
    for (int i = 0; i < 4; ++i) {
      corners[level * 4 + i] =
          box.center + r * Vec3(kSignX[i] * hl, kSignY[i] * hw, z);
    }
  }
  return corners;
}

std::optional<PixelRect> ProjectedBoxRect(const Box3D& box,
                                          const CameraFrame& cam) {
  const std::array<Vec3, 8> corners = BoxCorners(box);
  std::array<Vec3, 8> cam_corners;
  for (int i = 0; i < 8; ++i) cam_corners[i] = WorldToCamera(corners[i], cam);
  bool any = false;
  PixelRect rect{HUGE_VAL, HUGE_VAL, -HUGE_VAL, -HUGE_VAL};
  auto extend = [&](const Vec3& p) {
    const Vec2 uv = ProjectCameraPoint(p, cam.intrinsics);
    rect.x0 = std::min(rect.x0, uv.x());
    rect.y0 = std::min(rect.y0, uv.y());
    rect.x1 = std::max(rect.x1, uv.x());
    rect.y1 = std::max(rect.y1, uv.y());
    any = true;
  };
  for (const auto& edge : kBoxEdges) {
    Vec3 a = cam_corners[edge[0]];
    Vec3 b = cam_corners[edge[1]];
    if (!ClipSegmentToNearPlane(a, b)) continue;
    extend(a);
    extend(b);
  }
  if (!any) return std::nullopt;
  return rect;
}

std::optional<PixelRect> ClipToImage(const PixelRect& rect, int width,
                                     int height) {
  PixelRect out{std::max(rect.x0, 0.0), std::max(rect.y0, 0.0),
                std::min(rect.x1, static_cast<double>(width - 1)),
                std::min(rect.y1, static_cast<double>(height - 1))};
  if (out.empty()) return std::nullopt;
  return out;
}

absl::StatusOr<ScalarImage> RenderDepthBoxes(const SceneLayout& layout,
                                             int frame,
                                             std::string_view camera_id) {
  GSEDIT_ASSIGN_OR_RETURN(const CameraFrame* cam, layout.Camera(frame, camera_id));
  ScalarImage depth(cam->intrinsics.width, cam->intrinsics.height, 1, 0.0);
  for (const ObjectTrack& track : layout.tracks) {
    const Box3D* box = track.BoxAt(frame);
    if (box == nullptr) continue;
    const std::array<Vec3, 8> corners = BoxCorners(*box);
    std::array<ScreenVertex, 8> screen;
    std::array<bool, 8> in_front;
    for (int i = 0; i < 8; ++i) {
      const Vec3 p = WorldToCamera(corners[i], *cam);
      in_front[i] = p.z() > kNearPlane;
      const Vec2 uv = ProjectCameraPoint(p, cam->intrinsics);
      screen[i] = {uv.x(), uv.y(), p.z()};
    }
    for (const auto& face : kBoxFaces) {
      if (!(in_front[face[0]] && in_front[face[1]] && in_front[face[2]] &&
            in_front[face[3]])) {
        continue;
      }
      RasterizeTriangle(screen[face[0]], screen[face[1]], screen[face[2]], depth);
      RasterizeTriangle(screen[face[0]], screen[face[2]], screen[face[3]], depth);
    }
  }
  return depth;
}

absl::StatusOr<Mask> RenderEdgeMask(const SceneLayout& layout, int frame,
                                    std::string_view camera_id,
                                    double thickness) {
  GSEDIT_ASSIGN_OR_RETURN(const CameraFrame* cam, layout.Camera(frame, camera_id));
  Mask mask(cam->intrinsics.width, cam->intrinsics.height, 1, 0);
  const double radius = 0.5 * thickness;
  for (const ObjectTrack& track : layout.tracks) {
    const Box3D* box = track.BoxAt(frame);
    if (box == nullptr) continue;
    const std::array<Vec3, 8> corners = BoxCorners(*box);
    for (const auto& edge : kBoxEdges) {
      Vec3 a = WorldToCamera(corners[edge[0]], *cam);
      Vec3 b = WorldToCamera(corners[edge[1]], *cam);
      if (!ClipSegmentToNearPlane(a, b)) continue;
      DrawThickSegment(ProjectCameraPoint(a, cam->intrinsics),
                       ProjectCameraPoint(b, cam->intrinsics), radius, mask);
    }
  }
  return mask;
}

absl::StatusOr<int> NeighborsWithin(const SceneLayout& layout, int frame,
                                    std::string_view object_id,
                                    double radius) {
  const ObjectTrack* target = layout.FindTrack(object_id);
  const Box3D* target_box = target ? target->BoxAt(frame) : nullptr;
  if (target_box == nullptr) {
    return MakeError(ErrorCode::kObjectAbsent,
                     absl::StrCat("object '", Sv(object_id), "' absent at frame ",
                                  frame));
  }
  const Vec2 c = target_box->center.head<2>();
  int count = 0;
  for (const ObjectTrack& t : layout.tracks) {
    if (t.object_id == object_id) continue;
    const Box3D* b = t.BoxAt(frame);
    if (b == nullptr) continue;
    if ((b->center.head<2>() - c).norm() <= radius) ++count;
  }
  return count;
}

std::vector<ClipWindow> SelectClips(const SceneLayout& layout,
                                    std::string_view camera_id,
                                    const ClipSelectionParams& params) {
  std::vector<ClipWindow> out;
  if (params.num_frames < 1) return out;
  for (const ObjectTrack& track : layout.tracks) {
    std::vector<bool> good(static_cast<size_t>(std::max(layout.num_frames, 0)), false);
    for (int f = 0; f < layout.num_frames; ++f) {
      const Box3D* box = track.BoxAt(f);
      if (box == nullptr) continue;
      auto cam = layout.Camera(f, camera_id);
      if (!cam.ok()) continue;
      const std::optional<PixelRect> rect = ProjectedBoxRect(*box, **cam);
      if (!rect) continue;
      const std::optional<PixelRect> clipped = ClipToImage(
          *rect, (*cam)->intrinsics.width, (*cam)->intrinsics.height);
      if (!clipped || clipped->height() < params.min_height_px) continue;
      auto neighbors =
          NeighborsWithin(layout, f, track.object_id, params.neighbor_radius_m);
      if (!neighbors.ok() || *neighbors >= params.max_neighbors) continue;
      good[f] = true;
    }
    for (int start = 0; start + params.num_frames <= layout.num_frames; ++start) {
      bool all = true;
      for (int f = start; f < start + params.num_frames && all; ++f) all = good[f];
      if (all) out.push_back({track.object_id, start});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace gsedit
