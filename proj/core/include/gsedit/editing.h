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

// Edit commands on scene layouts and assembly of per-clip conditioning
// bundles.
//
// A bundle holds, per frame of the clip:
//   gaussian_video  the edited object's asset rendered at its edited pose and
//                   composited over white (pure white for deletions)
//   depth_boxes     nearest box-face depth of the edited scene layout
//   edge_masks      wireframes of the edited scene layout
//   inpaint_masks   padded projected box of the edited object (for
//                   repositioning, old and new pose; for deletion, the
//                   removed boxes)
//   masked_video    source frame with the inpaint mask set to mid-gray
// plus one square reference image.
//
// Color planes are stored as 8-bit so that the channel stack derived from
// them is reproducible bit-for-bit from the files on disk.

#ifndef GSEDIT_EDITING_H_
#define GSEDIT_EDITING_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gsedit/dataprep.h"
#include "gsedit/gaussians.h"
#include "gsedit/geometry.h"
#include "gsedit/image.h"
#include "gsedit/layout.h"

namespace gsedit {

// Pose change of an existing object. The translation is expressed in the
// object's pre-edit frame: +x forward, +y left, +z up.
struct Reposition {
  std::string object_id;
  double delta_yaw = 0.0;
  Vec3 delta_t_local = Vec3::Zero();
  // Asset to render; empty means the object id.
  std::string asset_ref;
  friend bool operator==(const Reposition&, const Reposition&) = default;
};

struct Insert {
  std::string asset_ref;
  ObjectTrack track;
  friend bool operator==(const Insert&, const Insert&) = default;
};

struct Delete {
  std::string object_id;
  friend bool operator==(const Delete&, const Delete&) = default;
};

using EditCommand = std::variant<Reposition, Insert, Delete>;

std::string_view EditKind(const EditCommand& cmd);

// Id of the edited object: the target for Reposition/Delete, and
// "ins_<payload id>" for Insert.
std::string EditedObjectId(const EditCommand& cmd);

// Asset that supplies the Gaussian rendering; empty for Delete.
std::string AssetRefOf(const EditCommand& cmd);

// Errors: UnknownObject (Reposition/Delete target missing),
// DuplicateObjectId (inserted id already present), InvalidArgument (insert
// frames outside the layout).
absl::StatusOr<SceneLayout> ApplyEdit(const SceneLayout& layout,
                                      const EditCommand& cmd);

// Axis-aligned extent of the cloud's 3-sigma envelope.
Vec3 ThreeSigmaExtent(const GaussianCloud& cloud);

// Uniformly scales the asset so its 3-sigma extent fits the box dims
// (s = min_i dims_i / extent_i), then places it at the box pose.
// Errors: EmptyAsset, DegenerateExtent (an extent <= 1e-6 m), WrongFrame.
absl::StatusOr<GaussianCloud> PlaceAsset(const GaussianCloud& asset,
                                         const Box3D& box);

struct AssetStore {
  std::map<std::string, GaussianCloud> clouds;
  // Optional ready-made reference images per asset.
  std::map<std::string, RgbImage> references;
};

struct ClipSpec {
  std::string camera_id;
  int start_frame = 0;
  int num_frames = 10;
};

struct ClipMeta {
  std::string object_id;
  int start_frame = 0;
  int num_frames = 0;
  std::string camera_id;
  EditCommand edit;
  uint64_t seed = 0;
};

struct ConditioningBundle {
  std::vector<Rgb8Image> gaussian_video;
  std::vector<ScalarImage> depth_boxes;
  std::vector<Mask> edge_masks;
  std::vector<Mask> inpaint_masks;
  std::vector<Rgb8Image> masked_video;
  Rgb8Image reference_image;
  ClipMeta meta;

  int num_frames() const { return static_cast<int>(gaussian_video.size()); }
  absl::Status Validate() const;
};

// Source frame lookup for (frame index, camera).
using FrameSource =
    std::function<absl::StatusOr<RgbImage>(const CameraFrame& cam)>;

struct BundleOptions {
  RasterConfig raster;
  MaskPadding padding;
  double edge_thickness = 2.0;
  // When set, the reference image is augmented (never for deletions).
  std::optional<AugmentParams> augment;
  uint64_t seed = 0;
  int reference_size = 256;
  int num_threads = 1;
};

// `layout` is the unedited scene; the edit is applied internally. The clip
// must be valid in the edited layout (in the original one for deletions):
// the edited object is present and a camera exists in every frame.
absl::StatusOr<ConditioningBundle> BuildBundle(const SceneLayout& layout,
                                               const EditCommand& cmd,
                                               const ClipSpec& clip,
                                               const AssetStore& assets,
                                               const FrameSource& frames,
                                               const BundleOptions& options = {});

// N x 14 x (H/8) x (W/8) float tensor, channel-major per frame.
//
//   [0, 4)   latent noise slot, zero
//   [4, 8)   mock-encoded masked video
//   [8, 9)   pooled inpaint mask
//   [9, 13)  mock-encoded Gaussian video
//   [13, 14) pooled edge mask
//
// The mock encoder averages 8x8 blocks and applies the rows (1,0,0),
// (0,1,0), (0,0,1), (1/3,1/3,1/3). Exact arithmetic: with S_c the integer
// sum of 8-bit values of channel c over the block, channel c is
// float(S_c / 16320.0) and the fourth is float((S_r+S_g+S_b) / 48960.0);
// masks are float(count / 64.0).
struct ChannelStack {
  static constexpr int kChannels = 14;
  static constexpr int kExtraChannels = 10;

  int frames = 0;
  int height = 0;
  int width = 0;
  std::vector<float> values;

  static const std::vector<std::string>& ChannelNames();

  float& at(int n, int c, int y, int x) {
    return values[((static_cast<size_t>(n) * kChannels + c) * height + y) * width + x];
  }
  float at(int n, int c, int y, int x) const {
    return values[((static_cast<size_t>(n) * kChannels + c) * height + y) * width + x];
  }
};

// DimensionNotDivisible when H or W is not a multiple of 8.
absl::StatusOr<ChannelStack> AssembleChannelStack(
    const ConditioningBundle& bundle);

}  // namespace gsedit

#endif  // GSEDIT_EDITING_H_
