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

#include "gsedit/bundle_io.h"

#include <filesystem>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "gsedit/image_io.h"
#include "gsedit/scene_io.h"
#include "gsedit/status.h"
#include "gsedit/tensor_file.h"
#include "string_compat.h"

namespace gsedit {
namespace {

namespace fs = std::filesystem;

std::string Join(const std::string& dir, std::string_view name) {
  return (fs::path(dir) / std::string(name)).string();
}

absl::StatusOr<std::string> Read(const std::string& dir, std::string_view name) {
  return ReadFile(Join(dir, name));
}

template <typename T>
absl::StatusOr<T> WithPath(absl::StatusOr<T> result, const std::string& path) {
  if (result.ok()) return result;
  const ErrorCode code = ErrorCodeOf(result.status()).value_or(ErrorCode::kIoError);
  return MakeError(code, absl::StrCat(path, ": ", result.status().message()));
}

}  // namespace

std::string BundleFrameName(std::string_view prefix, int index,
                            std::string_view extension) {
  return absl::StrFormat("%s_%03d.%s", Sv(prefix), index, Sv(extension));
}

absl::Status WriteBundle(const std::string& dir, const ConditioningBundle& bundle,
                         const ChannelStack& stack) {
  GSEDIT_RETURN_IF_ERROR(bundle.Validate());
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    return MakeError(ErrorCode::kIoError,
                     absl::StrCat("cannot create ", dir, ": ", ec.message()));
  }
  for (int n = 0; n < bundle.num_frames(); ++n) {
    GSEDIT_ASSIGN_OR_RETURN(const std::string vg, EncodePng(bundle.gaussian_video[n]));
    GSEDIT_RETURN_IF_ERROR(WriteFileAtomic(Join(dir, BundleFrameName("vg", n, "png")), vg));
    GSEDIT_ASSIGN_OR_RETURN(const std::string vbg, EncodePng(bundle.masked_video[n]));
    GSEDIT_RETURN_IF_ERROR(WriteFileAtomic(Join(dir, BundleFrameName("vbg", n, "png")), vbg));
    GSEDIT_ASSIGN_OR_RETURN(const std::string mask, EncodeMaskPng(bundle.inpaint_masks[n]));
    GSEDIT_RETURN_IF_ERROR(WriteFileAtomic(Join(dir, BundleFrameName("mask", n, "png")), mask));
    GSEDIT_ASSIGN_OR_RETURN(const std::string edge, EncodeMaskPng(bundle.edge_masks[n]));
    GSEDIT_RETURN_IF_ERROR(WriteFileAtomic(Join(dir, BundleFrameName("edge", n, "png")), edge));
    GSEDIT_RETURN_IF_ERROR(WriteFileAtomic(Join(dir, BundleFrameName("depth", n, "pfm")),
                                           EncodePfm(bundle.depth_boxes[n])));
  }
  GSEDIT_ASSIGN_OR_RETURN(const std::string ref, EncodePng(bundle.reference_image));
  GSEDIT_RETURN_IF_ERROR(WriteFileAtomic(Join(dir, "reference.png"), ref));
  GSEDIT_ASSIGN_OR_RETURN(const std::string tensor, EncodeTensor(StackToTensor(stack)));
  GSEDIT_RETURN_IF_ERROR(WriteFileAtomic(Join(dir, kStackFileName), tensor));
  return WriteFileAtomic(Join(dir, kClipMetaFileName), SerializeClipMeta(bundle.meta));
}

absl::StatusOr<ConditioningBundle> ReadBundle(const std::string& dir) {
  ConditioningBundle bundle;
  GSEDIT_ASSIGN_OR_RETURN(const std::string meta_text, Read(dir, kClipMetaFileName));
  GSEDIT_ASSIGN_OR_RETURN(bundle.meta,
                          WithPath(ParseClipMeta(meta_text), Join(dir, kClipMetaFileName)));
  for (int n = 0; n < bundle.meta.num_frames; ++n) {
    const std::string vg_path = Join(dir, BundleFrameName("vg", n, "png"));
    GSEDIT_ASSIGN_OR_RETURN(const std::string vg, ReadFile(vg_path));
    GSEDIT_ASSIGN_OR_RETURN(Rgb8Image vg_img, WithPath(DecodePng(vg), vg_path));
    bundle.gaussian_video.push_back(std::move(vg_img));

    const std::string vbg_path = Join(dir, BundleFrameName("vbg", n, "png"));
    GSEDIT_ASSIGN_OR_RETURN(const std::string vbg, ReadFile(vbg_path));
    GSEDIT_ASSIGN_OR_RETURN(Rgb8Image vbg_img, WithPath(DecodePng(vbg), vbg_path));
    bundle.masked_video.push_back(std::move(vbg_img));

    const std::string mask_path = Join(dir, BundleFrameName("mask", n, "png"));
    GSEDIT_ASSIGN_OR_RETURN(const std::string mask, ReadFile(mask_path));
    GSEDIT_ASSIGN_OR_RETURN(Mask mask_img, WithPath(DecodeMaskPng(mask), mask_path));
    bundle.inpaint_masks.push_back(std::move(mask_img));

    const std::string edge_path = Join(dir, BundleFrameName("edge", n, "png"));
    GSEDIT_ASSIGN_OR_RETURN(const std::string edge, ReadFile(edge_path));
    GSEDIT_ASSIGN_OR_RETURN(Mask edge_img, WithPath(DecodeMaskPng(edge), edge_path));
    bundle.edge_masks.push_back(std::move(edge_img));

    const std::string depth_path = Join(dir, BundleFrameName("depth", n, "pfm"));
    GSEDIT_ASSIGN_OR_RETURN(const std::string depth, ReadFile(depth_path));
    GSEDIT_ASSIGN_OR_RETURN(ScalarImage depth_img, WithPath(DecodePfm(depth), depth_path));
    bundle.depth_boxes.push_back(std::move(depth_img));
  }
  const std::string ref_path = Join(dir, "reference.png");
  GSEDIT_ASSIGN_OR_RETURN(const std::string ref, ReadFile(ref_path));
  GSEDIT_ASSIGN_OR_RETURN(bundle.reference_image, WithPath(DecodePng(ref), ref_path));
  GSEDIT_RETURN_IF_ERROR(bundle.Validate());
  return bundle;
}

absl::StatusOr<ChannelStack> ReadStack(const std::string& dir) {
  const std::string path = Join(dir, kStackFileName);
  GSEDIT_ASSIGN_OR_RETURN(const std::string bytes, ReadFile(path));
  GSEDIT_ASSIGN_OR_RETURN(const Tensor tensor, WithPath(DecodeTensor(bytes), path));
  return TensorToStack(tensor);
}

}  // namespace gsedit
