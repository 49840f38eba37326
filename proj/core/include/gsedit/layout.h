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

// Scene-level 3D box layouts and the rasterizers driven by them.

#ifndef GSEDIT_LAYOUT_H_
#define GSEDIT_LAYOUT_H_

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gsedit/geometry.h"
#include "gsedit/image.h"

namespace gsedit {

enum class ObjectClass { kVehicle, kPedestrian, kCyclist, kOther };

std::string_view ObjectClassName(ObjectClass c);
absl::StatusOr<ObjectClass> ParseObjectClass(std::string_view name);

// 7-DoF box. Length runs along the heading, width to the left, height up.
struct Box3D {
  Vec3 center = Vec3::Zero();
  Vec3 dims = Vec3::Ones();  // (length, width, height)
  double yaw = 0.0;          // wrapped to (-pi, pi]

  absl::Status Validate() const;
  friend bool operator==(const Box3D&, const Box3D&) = default;
};

struct ObjectTrack {
  std::string object_id;
  ObjectClass object_class = ObjectClass::kVehicle;
  std::map<int, Box3D> boxes;  // frame index -> box

  const Box3D* BoxAt(int frame) const {
    auto it = boxes.find(frame);
    return it == boxes.end() ? nullptr : &it->second;
  }
  friend bool operator==(const ObjectTrack&, const ObjectTrack&) = default;
};

using CameraKey = std::pair<int, std::string>;  // (frame index, camera id)

struct SceneLayout {
  int num_frames = 0;
  std::map<CameraKey, CameraFrame> cameras;
  std::vector<ObjectTrack> tracks;
  // Optional source image path per camera frame, relative to the scene file.
  std::map<CameraKey, std::string> source_images;

  // MissingCamera if absent.
  absl::StatusOr<const CameraFrame*> Camera(int frame,
                                            std::string_view camera_id) const;
  const ObjectTrack* FindTrack(std::string_view object_id) const;
  // Camera ids in first-seen order of the sorted camera map.
  std::vector<std::string> CameraIds() const;
  absl::Status Validate() const;
};

// Corner order: bottom face counter-clockwise seen from above starting at
// front-left (front-left, rear-left, rear-right, front-right), then the top
// face in the same order.
std::array<Vec3, 8> BoxCorners(const Box3D& box);

// Faces as corner quadruples (a, b, c, d); each face is rasterized as the
// triangles (a, b, c) and (a, c, d).
inline constexpr std::array<std::array<int, 4>, 6> kBoxFaces = {{
    {0, 1, 2, 3},  // bottom
    {4, 5, 6, 7},  // top
    {0, 1, 5, 4},  // left
    {1, 2, 6, 5},  // rear
    {2, 3, 7, 6},  // right
    {3, 0, 4, 7},  // front
}};

inline constexpr std::array<std::array<int, 2>, 12> kBoxEdges = {{
    {0, 1}, {1, 2}, {2, 3}, {3, 0},  // bottom
    {4, 5}, {5, 6}, {6, 7}, {7, 4},  // top
    {0, 4}, {1, 5}, {2, 6}, {3, 7},  // verticals
}};

// Axis-aligned rectangle in continuous pixel coordinates.
struct PixelRect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  bool empty() const { return !(x1 >= x0 && y1 >= y0); }
  bool Intersects(const PixelRect& o) const {
    return x0 <= o.x1 && o.x0 <= x1 && y0 <= o.y1 && o.y0 <= y1;
  }
  friend bool operator==(const PixelRect&, const PixelRect&) = default;
};

// Bounding rectangle of the box's projection, computed from its 12 edges
// clipped at the near plane. nullopt when the box is entirely behind it.
// The result is not clipped to the image.
std::optional<PixelRect> ProjectedBoxRect(const Box3D& box,
                                          const CameraFrame& cam);

// Intersection with the image's pixel-center range [0, W-1] x [0, H-1];
// nullopt when empty.
std::optional<PixelRect> ClipToImage(const PixelRect& rect, int width,
                                     int height);

// Camera-space depth of the nearest box face per pixel; 0 where no face
// covers the pixel. Faces with a corner behind the near plane are dropped.
absl::StatusOr<ScalarImage> RenderDepthBoxes(const SceneLayout& layout,
                                             int frame,
                                             std::string_view camera_id);

// Wireframes of every box in the frame, drawn `thickness` pixels wide.
absl::StatusOr<Mask> RenderEdgeMask(const SceneLayout& layout, int frame,
                                    std::string_view camera_id,
                                    double thickness = 2.0);

// Other tracks present in `frame` whose horizontal center distance to
// `object_id` is <= radius. ObjectAbsent if the target has no box there.
absl::StatusOr<int> NeighborsWithin(const SceneLayout& layout, int frame,
                                    std::string_view object_id,
                                    double radius);

struct ClipSelectionParams {
  int num_frames = 10;
  double min_height_px = 40.0;
  int max_neighbors = 2;
  double neighbor_radius_m = 3.0;
};

struct ClipWindow {
  std::string object_id;
  int start_frame = 0;

  friend auto operator<=>(const ClipWindow&, const ClipWindow&) = default;
};

// Every window of params.num_frames consecutive frames in which the object
// has a box, its image-clipped projected height is >= min_height_px, and
// fewer than max_neighbors other objects are within neighbor_radius_m.
// Sorted by (object_id, start_frame).
std::vector<ClipWindow> SelectClips(const SceneLayout& layout,
                                    std::string_view camera_id,
                                    const ClipSelectionParams& params = {});

}  // namespace gsedit

#endif  // GSEDIT_LAYOUT_H_
