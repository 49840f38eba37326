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

// Glue shared by the subcommands: composite edits, edited-instance
// bookkeeping and per-camera detection matching.

#ifndef GSEDIT_TOOLS_PIPELINE_H_
#define GSEDIT_TOOLS_PIPELINE_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "gsedit/editing.h"
#include "gsedit/evalkit.h"
#include "gsedit/layout.h"

namespace gsedit::tools {

// Applies the edits one after another.
absl::StatusOr<SceneLayout> ApplyEdits(const SceneLayout& layout,
                                       std::span<const EditCommand> edits);

// Objects that exist after the edits and were repositioned or inserted, in
// first-edit order.
std::vector<std::string> EditedInstanceIds(std::span<const EditCommand> edits);

// One clip per camera of `edited`, one frame result per frame with ground
// truth or detections. With `instance_ids` set only those objects are
// scored and detections explained by any other object are ignored;
// otherwise every object is scored. MissingCamera if a detection names a
// camera frame absent from the layout.
absl::StatusOr<std::vector<ClipMatches>> MatchDetections(
    const SceneLayout& edited,
    const std::optional<std::vector<std::string>>& instance_ids,
    std::span<const Detection> detections, const EvalConfig& config);

}  // namespace gsedit::tools

#endif  // GSEDIT_TOOLS_PIPELINE_H_
