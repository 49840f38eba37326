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

#include "gsedit/editing.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "gsedit/parallel.h"
#include "gsedit/status.h"

namespace gsedit {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Rgb8Image WhiteImage(int width, int height) {
  return Rgb8Image(width, height, 3, 255);
}

Mask UnionMask(const Mask& a, const Mask& b) {
  Mask out = a;
  auto dst = out.data();
  auto src = b.data();
  for (size_t i = 0; i < dst.size(); ++i) dst[i] = (dst[i] | src[i]) ? 1 : 0;
  return out;
}

// Box of the object that must be present for the clip to be valid.
const ObjectTrack* ClipTrack(const SceneLayout& original,
                             const SceneLayout& edited, const EditCommand& cmd) {
  if (std::holds_alternative<Delete>(cmd)) {
    return original.FindTrack(std::get<Delete>(cmd).object_id);
  }
  return edited.FindTrack(EditedObjectId(cmd));
}

struct FrameOutputs {
  Rgb8Image gaussian;
  ScalarImage depth;
  Mask edges;
  Mask inpaint;
  Rgb8Image masked;
  RgbImage source;
};

}  // namespace

std::string_view EditKind(const EditCommand& cmd) {
  return std::visit(Overloaded{[](const Reposition&) { return "reposition"; },
                               [](const Insert&) { return "insert"; },
                               [](const Delete&) { return "delete"; }},
                    cmd);
}

std::string EditedObjectId(const EditCommand& cmd) {
  return std::visit(
      Overloaded{[](const Reposition& r) { return r.object_id; },
                 [](const Insert& i) {
                   return absl::StrCat(
                       "ins_", i.track.object_id.empty() ? i.asset_ref
                                                         : i.track.object_id);
                 },
                 [](const Delete& d) { return d.object_id; }},
      cmd);
}

std::string AssetRefOf(const EditCommand& cmd) {
  return std::visit(
      Overloaded{[](const Reposition& r) {
                   return r.asset_ref.empty() ? r.object_id : r.asset_ref;
                 },
                 [](const Insert& i) { return i.asset_ref; },
                 [](const Delete&) { return std::string(); }},
      cmd);
}

absl::StatusOr<SceneLayout> ApplyEdit(const SceneLayout& layout,
                                      const EditCommand& cmd) {
  SceneLayout out = layout;
  auto find = [&](const std::string& id) -> absl::StatusOr<size_t> {
    for (size_t i = 0; i < out.tracks.size(); ++i) {
      if (out.tracks[i].object_id == id) return i;
    }
    return MakeError(ErrorCode::kUnknownObject,
                     absl::StrCat("no object '", id, "' in layout"));
  };

  if (const auto* r = std::get_if<Reposition>(&cmd)) {
    GSEDIT_ASSIGN_OR_RETURN(const size_t idx, find(r->object_id));
    for (auto& [frame, box] : out.tracks[idx].boxes) {
      const Vec3 shift = YawRotation(box.yaw) * r->delta_t_local;
      box.center += shift;
      box.yaw = WrapAngle(box.yaw + r->delta_yaw);
    }
  } else if (const auto* ins = std::get_if<Insert>(&cmd)) {
    ObjectTrack track = ins->track;
    track.object_id = EditedObjectId(cmd);
    if (out.FindTrack(track.object_id) != nullptr) {
      return MakeError(ErrorCode::kDuplicateObjectId,
                       absl::StrCat("object '", track.object_id,
                                    "' already exists"));
    }
    for (auto& [frame, box] : track.boxes) {
      if (frame < 0 || frame >= layout.num_frames) {
        return MakeError(ErrorCode::kInvalidArgument,
                         absl::StrCat("inserted track frame ", frame,
                                      " outside the layout"));
      }
      box.yaw = WrapAngle(box.yaw);
      GSEDIT_RETURN_IF_ERROR(box.Validate());
    }
    out.tracks.push_back(std::move(track));
  } else {
    const auto& del = std::get<Delete>(cmd);
    GSEDIT_ASSIGN_OR_RETURN(const size_t idx, find(del.object_id));
    out.tracks.erase(out.tracks.begin() + static_cast<std::ptrdiff_t>(idx));
  }
  return out;
}

Vec3 ThreeSigmaExtent(const GaussianCloud& cloud) {
  if (cloud.empty()) return Vec3::Zero();
  Vec3 lo = Vec3::Constant(HUGE_VAL);
  Vec3 hi = Vec3::Constant(-HUGE_VAL);
  for (const Gaussian3D& g : cloud.gaussians) {
    const Vec3 sigma = g.Covariance().diagonal().cwiseSqrt();
    lo = lo.cwiseMin(g.mean - 3.0 * sigma);
    hi = hi.cwiseMax(g.mean + 3.0 * sigma);
  }
  return hi - lo;
}

absl::StatusOr<GaussianCloud> PlaceAsset(const GaussianCloud& asset,
                                         const Box3D& box) {
  if (asset.empty()) return MakeError(ErrorCode::kEmptyAsset, "asset has no gaussians");
  const Vec3 extent = ThreeSigmaExtent(asset);
  if ((extent.array() <= 1e-6).any()) {
    return MakeError(ErrorCode::kDegenerateExtent,
                     absl::StrCat("asset extent (", extent.x(), ", ", extent.y(),
                                  ", ", extent.z(), ") is degenerate"));
  }
  const double s = box.dims.cwiseQuotient(extent).minCoeff();
  GaussianCloud scaled = asset;
  for (Gaussian3D& g : scaled.gaussians) {
    g.mean *= s;
    g.scale *= s;
  }
  return TransformCloud(scaled, YawPose(box.yaw, box.center));
}

absl::Status ConditioningBundle::Validate() const {
  const size_t n = gaussian_video.size();
  if (depth_boxes.size() != n || edge_masks.size() != n ||
      inpaint_masks.size() != n || masked_video.size() != n) {
    return MakeError(ErrorCode::kShapeMismatch, "bundle sequences differ in length");
  }
  for (size_t i = 0; i < n; ++i) {
    const Rgb8Image& ref = gaussian_video[i];
    if (!ref.SameExtent(depth_boxes[i]) || !ref.SameExtent(edge_masks[i]) ||
        !ref.SameExtent(inpaint_masks[i]) || !ref.SameExtent(masked_video[i]) ||
        !ref.SameExtent(gaussian_video[0])) {
      return MakeError(ErrorCode::kShapeMismatch,
                       absl::StrCat("bundle frame ", i, " has inconsistent size"));
    }
  }
  if (reference_image.width() != reference_image.height()) {
    return MakeError(ErrorCode::kShapeMismatch, "reference image is not square");
  }
  return absl::OkStatus();
}

absl::StatusOr<ConditioningBundle> BuildBundle(const SceneLayout& layout,
                                               const EditCommand& cmd,
                                               const ClipSpec& clip,
                                               const AssetStore& assets,
                                               const FrameSource& frames,
                                               const BundleOptions& options) {
  GSEDIT_ASSIGN_OR_RETURN(const SceneLayout edited, ApplyEdit(layout, cmd));
  const bool is_delete = std::holds_alternative<Delete>(cmd);
  const std::string object_id = EditedObjectId(cmd);
  const std::string asset_ref = AssetRefOf(cmd);

  const GaussianCloud* asset = nullptr;
  if (!is_delete) {
    auto it = assets.clouds.find(asset_ref);
    if (it == assets.clouds.end()) {
      return MakeError(ErrorCode::kMissingAsset,
                       absl::StrCat("no asset '", asset_ref, "'"));
    }
    asset = &it->second;
  }

  if (clip.num_frames < 1 || clip.start_frame < 0 ||
      clip.start_frame + clip.num_frames > layout.num_frames) {
    return MakeError(ErrorCode::kInvalidArgument,
                     absl::StrCat("clip [", clip.start_frame, ", ",
                                  clip.start_frame + clip.num_frames,
                                  ") outside the layout"));
  }
  const ObjectTrack* clip_track = ClipTrack(layout, edited, cmd);
  const ObjectTrack* original_track =
      std::holds_alternative<Insert>(cmd) ? nullptr : layout.FindTrack(object_id);
  const ObjectTrack* edited_track = is_delete ? nullptr : edited.FindTrack(object_id);
  std::vector<int> clip_frames(static_cast<size_t>(clip.num_frames));
  std::iota(clip_frames.begin(), clip_frames.end(), clip.start_frame);
  std::vector<const CameraFrame*> cams;
  for (int f : clip_frames) {
    GSEDIT_ASSIGN_OR_RETURN(const CameraFrame* cam, edited.Camera(f, clip.camera_id));
    cams.push_back(cam);
    if (clip_track == nullptr || clip_track->BoxAt(f) == nullptr) {
      return MakeError(ErrorCode::kObjectAbsent,
                       absl::StrCat("object '", object_id, "' absent at frame ", f));
    }
  }

  std::vector<FrameOutputs> outputs(clip_frames.size());
  std::vector<absl::Status> statuses(clip_frames.size());
  ParallelFor(clip_frames.size(), options.num_threads, [&](size_t i) {
    statuses[i] = [&]() -> absl::Status {
      const int f = clip_frames[i];
      const CameraFrame& cam = *cams[i];
      const int w = cam.intrinsics.width;
      const int h = cam.intrinsics.height;
      FrameOutputs& out = outputs[i];

      if (is_delete) {
        out.gaussian = WhiteImage(w, h);
      } else {
        GSEDIT_ASSIGN_OR_RETURN(const GaussianCloud placed,
                                PlaceAsset(*asset, *edited_track->BoxAt(f)));
        out.gaussian = Quantize(CompositeOverWhite(Render(placed, cam, options.raster)));
      }
      GSEDIT_ASSIGN_OR_RETURN(out.depth, RenderDepthBoxes(edited, f, cam.camera_id));
      GSEDIT_ASSIGN_OR_RETURN(
          out.edges, RenderEdgeMask(edited, f, cam.camera_id, options.edge_thickness));

      out.inpaint = Mask(w, h, 1, 0);
      auto add_box = [&](const Box3D* box) -> absl::Status {
        if (box == nullptr) return absl::OkStatus();
        auto m = MakeMask(*box, cam, options.padding);
        if (!m.ok()) {
          if (ErrorCodeOf(m.status()) == ErrorCode::kFullyBehindCamera) {
            return absl::OkStatus();
          }
          return m.status();
        }
        out.inpaint = UnionMask(out.inpaint, *m);
        return absl::OkStatus();
      };
      if (original_track != nullptr) {
        GSEDIT_RETURN_IF_ERROR(add_box(original_track->BoxAt(f)));
      }
      if (edited_track != nullptr) {
        GSEDIT_RETURN_IF_ERROR(add_box(edited_track->BoxAt(f)));
      }

      GSEDIT_ASSIGN_OR_RETURN(out.source, frames(cam));
      if (out.source.width() != w || out.source.height() != h ||
          out.source.channels() != 3) {
        return MakeError(ErrorCode::kShapeMismatch,
                         absl::StrCat("source frame ", f, " is ",
                                      out.source.width(), "x", out.source.height(),
                                      ", camera expects ", w, "x", h));
      }
      GSEDIT_ASSIGN_OR_RETURN(const RgbImage masked, GrayOut(out.source, out.inpaint));
      out.masked = Quantize(masked);
      return absl::OkStatus();
    }();
  });
  for (const absl::Status& s : statuses) GSEDIT_RETURN_IF_ERROR(s);

  ConditioningBundle bundle;
  for (FrameOutputs& out : outputs) {
    bundle.gaussian_video.push_back(std::move(out.gaussian));
    bundle.depth_boxes.push_back(std::move(out.depth));
    bundle.edge_masks.push_back(std::move(out.edges));
    bundle.inpaint_masks.push_back(std::move(out.inpaint));
    bundle.masked_video.push_back(std::move(out.masked));
  }

  const int ref_size = options.reference_size;
  if (is_delete) {
    bundle.reference_image = WhiteImage(ref_size, ref_size);
  } else {
    std::optional<RgbImage> reference;
    if (auto it = assets.references.find(asset_ref); it != assets.references.end()) {
      reference = it->second;
    } else {
      // Farthest frame from the clip start first, as in training.
      std::vector<int> order = clip_frames;
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return std::abs(a - clip.start_frame) > std::abs(b - clip.start_frame);
      });
      for (int f : order) {
        const size_t i = static_cast<size_t>(f - clip.start_frame);
        // Repositioned objects are visible in the source video; inserted
        // ones only exist in their own rendering.
        auto crop =
            original_track != nullptr
                ? CropReference(outputs[i].source, *original_track->BoxAt(f), *cams[i])
                : CropReference(Dequantize(bundle.gaussian_video[i]),
                                *edited_track->BoxAt(f), *cams[i]);
        if (crop.ok()) {
          reference = *std::move(crop);
          break;
        }
      }
    }
    if (!reference.has_value()) {
      return MakeError(ErrorCode::kMissingReference,
                       absl::StrCat("object '", object_id,
                                    "' is never fully visible in the clip"));
    }
    RgbImage resized = ResizeBilinear(*reference, ref_size, ref_size);
    if (options.augment.has_value()) {
      Rng rng(options.seed);
      resized = AugmentReference(resized, *options.augment, rng);
    }
    bundle.reference_image = Quantize(resized);
  }

  bundle.meta = ClipMeta{object_id, clip.start_frame, clip.num_frames,
                         clip.camera_id, cmd, options.seed};
  GSEDIT_RETURN_IF_ERROR(bundle.Validate());
  return bundle;
}

const std::vector<std::string>& ChannelStack::ChannelNames() {
  static const std::vector<std::string> kNames = {
      "noise_0",  "noise_1",  "noise_2",    "noise_3",    "masked_0",
      "masked_1", "masked_2", "masked_3",   "inpaint_mask", "gaussian_0",
      "gaussian_1", "gaussian_2", "gaussian_3", "edge_mask"};
  return kNames;
}

absl::StatusOr<ChannelStack> AssembleChannelStack(
    const ConditioningBundle& bundle) {
  GSEDIT_RETURN_IF_ERROR(bundle.Validate());
  ChannelStack stack;
  stack.frames = bundle.num_frames();
  if (stack.frames == 0) return stack;
  const int w = bundle.gaussian_video[0].width();
  const int h = bundle.gaussian_video[0].height();
  if (w % 8 != 0 || h % 8 != 0) {
    return MakeError(ErrorCode::kDimensionNotDivisible,
                     absl::StrCat("frame size ", w, "x", h,
                                  " is not divisible by 8"));
  }
  stack.width = w / 8;
  stack.height = h / 8;
  stack.values.assign(static_cast<size_t>(stack.frames) * ChannelStack::kChannels *
                          stack.height * stack.width,
                      0.0f);

  auto encode = [&](const Rgb8Image& img, int n, int first_channel, int by,
                    int bx) {
    int64_t sums[3] = {0, 0, 0};
    for (int y = by * 8; y < by * 8 + 8; ++y) {
      for (int x = bx * 8; x < bx * 8 + 8; ++x) {
        for (int c = 0; c < 3; ++c) sums[c] += img(x, y, c);
      }
    }
    for (int c = 0; c < 3; ++c) {
      stack.at(n, first_channel + c, by, bx) =
          static_cast<float>(static_cast<double>(sums[c]) / 16320.0);
    }
    stack.at(n, first_channel + 3, by, bx) = static_cast<float>(
        static_cast<double>(sums[0] + sums[1] + sums[2]) / 48960.0);
  };
  auto pool = [&](const Mask& m, int n, int channel, int by, int bx) {
    int count = 0;
    for (int y = by * 8; y < by * 8 + 8; ++y) {
      for (int x = bx * 8; x < bx * 8 + 8; ++x) count += m(x, y) != 0;
    }
    stack.at(n, channel, by, bx) = static_cast<float>(count / 64.0);
  };

  for (int n = 0; n < stack.frames; ++n) {
    for (int by = 0; by < stack.height; ++by) {
      for (int bx = 0; bx < stack.width; ++bx) {
        encode(bundle.masked_video[n], n, 4, by, bx);
        pool(bundle.inpaint_masks[n], n, 8, by, bx);
        encode(bundle.gaussian_video[n], n, 9, by, bx);
        pool(bundle.edge_masks[n], n, 13, by, bx);
      }
    }
  }
  return stack;
}

}  // namespace gsedit
