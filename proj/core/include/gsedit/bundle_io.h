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

// Conditioning bundle directories.
//
//   vg_XXX.png      Gaussian video frame, 8-bit RGB
//   vbg_XXX.png     masked video frame, 8-bit RGB
//   mask_XXX.png    inpaint mask, 8-bit gray {0, 255}
//   edge_XXX.png    edge mask, 8-bit gray {0, 255}
//   depth_XXX.pfm   depth-aware boxes, float32 meters
//   reference.png   square reference image, 8-bit RGB
//   stack.gst       channel stack tensor file
//   clip_meta.json
//
// XXX is the zero-padded position within the clip.

#ifndef GSEDIT_BUNDLE_IO_H_
#define GSEDIT_BUNDLE_IO_H_

#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gsedit/editing.h"

namespace gsedit {

inline constexpr char kStackFileName[] = "stack.gst";
inline constexpr char kClipMetaFileName[] = "clip_meta.json";

std::string BundleFrameName(std::string_view prefix, int index,
                            std::string_view extension);

// Creates `dir` if needed; every file is written atomically.
absl::Status WriteBundle(const std::string& dir,
                         const ConditioningBundle& bundle,
                         const ChannelStack& stack);

// Depth planes come back at float32 precision.
absl::StatusOr<ConditioningBundle> ReadBundle(const std::string& dir);
absl::StatusOr<ChannelStack> ReadStack(const std::string& dir);

}  // namespace gsedit

#endif  // GSEDIT_BUNDLE_IO_H_
