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

// JSON documents exchanged with the command-line tools.
//
// Scene file:
//   {"version": 1,
//    "convention": {"camera": "+z forward,+y down", "yaw_zero": "+x"},
//    "num_frames": N,
//    "cameras": [{"frame", "camera_id",
//                 "intrinsics": {"fx", "fy", "cx", "cy", "width", "height"},
//                 "cam_to_world": [16 row-major values],
//                 "image": "relative/path.png"  (optional source frame)}],
//    "tracks": [{"object_id", "class",
//                "boxes": [{"frame", "center": [x, y, z],
//                           "dims": [l, w, h], "yaw"}]}]}
//
// Edits file:
//   {"edits": [
//     {"type": "reposition", "object_id", "delta_yaw_deg",
//      "delta_t_local": [x, y, z], "asset" (optional)},
//     {"type": "insert", "asset", "track": {<track as in the scene file>}},
//     {"type": "delete", "object_id"}]}
//
// Detections: JSON lines {"frame_index", "camera_id", "object_id"
// (optional), "center", "dims", "yaw", "score", "class"}.
//
// Serialization is canonical: keys sorted, two-space indentation, shortest
// round-trip decimals, trailing newline.

#ifndef GSEDIT_SCENE_IO_H_
#define GSEDIT_SCENE_IO_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "gsedit/editing.h"
#include "gsedit/evalkit.h"
#include "gsedit/layout.h"

namespace gsedit {

inline constexpr int kSceneFormatVersion = 1;

struct ParseOptions {
  // Unknown fields are errors when set, warnings otherwise.
  bool strict = false;
  // Receives warnings when non-null.
  std::vector<std::string>* warnings = nullptr;
};

// ParseError on malformed JSON, missing or unknown (strict) fields; the
// layout's own validation errors are passed through. Yaws are wrapped.
absl::StatusOr<SceneLayout> ParseScene(std::string_view text,
                                       const ParseOptions& options = {});
std::string SerializeScene(const SceneLayout& layout);

absl::StatusOr<std::vector<EditCommand>> ParseEdits(
    std::string_view text, const ParseOptions& options = {});
std::string SerializeEdits(std::span<const EditCommand> edits);

absl::StatusOr<std::vector<Detection>> ParseDetections(
    std::string_view text, const ParseOptions& options = {});
std::string SerializeDetections(std::span<const Detection> detections);

std::string SerializeMetricsReport(const MetricsReport& report,
                                   const EvalConfig& config);

// The edit is echoed with delta_yaw in radians.
std::string SerializeClipMeta(const ClipMeta& meta);
absl::StatusOr<ClipMeta> ParseClipMeta(std::string_view text);

}  // namespace gsedit

#endif  // GSEDIT_SCENE_IO_H_
