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

#include "pipeline.h"

#include <algorithm>
#include <map>
#include <set>

#include "absl/strings/str_cat.h"
#include "gsedit/status.h"

namespace gsedit::tools {

absl::StatusOr<SceneLayout> ApplyEdits(const SceneLayout& layout,
                                       std::span<const EditCommand> edits) {
  SceneLayout current = layout;
  for (size_t k = 0; k < edits.size(); ++k) {
    auto next = ApplyEdit(current, edits[k]);
    if (!next.ok()) {
      return MakeError(ErrorCodeOf(next.status()).value_or(ErrorCode::kInvalidArgument),
                       absl::StrCat("edit ", k, ": ", next.status().message()));
    }
    current = *std::move(next);
  }
  return current;
}

std::vector<std::string> EditedInstanceIds(std::span<const EditCommand> edits) {
  std::vector<std::string> ids;
  for (const EditCommand& cmd : edits) {
    const std::string id = EditedObjectId(cmd);
    if (std::holds_alternative<Delete>(cmd)) {
      std::erase(ids, id);
    } else if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
      ids.push_back(id);
    }
  }
  return ids;
}

absl::StatusOr<std::vector<ClipMatches>> MatchDetections(
    const SceneLayout& edited,
    const std::optional<std::vector<std::string>>& instance_ids,
    std::span<const Detection> detections, const EvalConfig& config) {
  std::map<CameraKey, std::vector<Detection>> by_frame;
  for (const Detection& d : detections) {
    const CameraKey key(d.frame_index, d.camera_id);
    if (!edited.cameras.contains(key)) {
      return MakeError(ErrorCode::kMissingCamera,
                       absl::StrCat("detection names camera '", d.camera_id,
                                    "' at frame ", d.frame_index,
                                    ", which the scene does not have"));
    }
    by_frame[key].push_back(d);
  }
  std::set<std::string> scored;
  if (instance_ids) scored.insert(instance_ids->begin(), instance_ids->end());

  std::vector<ClipMatches> clips;
  for (const std::string& camera_id : edited.CameraIds()) {
    ClipMatches clip;
    clip.clip_id = camera_id;
    for (int f = 0; f < edited.num_frames; ++f) {
      auto cam = edited.Camera(f, camera_id);
      if (!cam.ok()) continue;
      std::vector<GroundTruth> gts;
      std::vector<GroundTruth> ignore;
      for (const ObjectTrack& t : edited.tracks) {
        const Box3D* box = t.BoxAt(f);
        if (box == nullptr) continue;
        GroundTruth gt{*box, t.object_class, t.object_id};
        if (!instance_ids || scored.contains(t.object_id)) {
          gts.push_back(std::move(gt));
        } else {
          ignore.push_back(std::move(gt));
        }
      }
      auto it = by_frame.find(CameraKey(f, camera_id));
      const std::span<const Detection> dets =
          it == by_frame.end() ? std::span<const Detection>() : it->second;
      if (gts.empty() && dets.empty()) continue;
      clip.frames.push_back(
          LetMatchFrame(dets, gts, config, (*cam)->OpticalCenter(), ignore));
    }
    clips.push_back(std::move(clip));
  }
  return clips;
}

}  // namespace gsedit::tools
