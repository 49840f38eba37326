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

#include "gsedit/status.h"
#include "string_compat.h"

#include <array>
#include <string>
#include <utility>

#include "absl/strings/cord.h"
#include "absl/strings/str_cat.h"

namespace gsedit {
namespace {

constexpr char kPayloadUrl[] = "type.gsedit/error_code";

struct CodeInfo {
  ErrorCode code;
  std::string_view name;
  absl::StatusCode status_code;
};

constexpr std::array<CodeInfo, 26> kCodes = {{
    {ErrorCode::kBehindCamera, "BehindCamera", absl::StatusCode::kOutOfRange},
    {ErrorCode::kWrongFrame, "WrongFrame",
     absl::StatusCode::kFailedPrecondition},
    {ErrorCode::kMalformedPly, "MalformedPly",
     absl::StatusCode::kInvalidArgument},
    {ErrorCode::kNonFiniteValue, "NonFiniteValue",
     absl::StatusCode::kInvalidArgument},
    {ErrorCode::kDegenerateGaussian, "DegenerateGaussian",
     absl::StatusCode::kInvalidArgument},
    {ErrorCode::kMissingCamera, "MissingCamera", absl::StatusCode::kNotFound},
    {ErrorCode::kObjectAbsent, "ObjectAbsent", absl::StatusCode::kNotFound},
    {ErrorCode::kUnknownObject, "UnknownObject", absl::StatusCode::kNotFound},
    {ErrorCode::kDuplicateObjectId, "DuplicateObjectId",
     absl::StatusCode::kAlreadyExists},
    {ErrorCode::kEmptyAsset, "EmptyAsset", absl::StatusCode::kInvalidArgument},
    {ErrorCode::kDegenerateExtent, "DegenerateExtent",
     absl::StatusCode::kInvalidArgument},
    {ErrorCode::kMissingAsset, "MissingAsset", absl::StatusCode::kNotFound},
    {ErrorCode::kMissingReference, "MissingReference",
     absl::StatusCode::kNotFound},
    {ErrorCode::kDimensionNotDivisible, "DimensionNotDivisible",
     absl::StatusCode::kInvalidArgument},
    {ErrorCode::kFullyBehindCamera, "FullyBehindCamera",
     absl::StatusCode::kOutOfRange},
    {ErrorCode::kShapeMismatch, "ShapeMismatch",
     absl::StatusCode::kInvalidArgument},
    {ErrorCode::kNotFullyVisible, "NotFullyVisible",
     absl::StatusCode::kOutOfRange},
    {ErrorCode::kCropExceedsImage, "CropExceedsImage",
     absl::StatusCode::kOutOfRange},
    {ErrorCode::kNoFreeRegion, "NoFreeRegion",
     absl::StatusCode::kResourceExhausted},
    {ErrorCode::kDegenerateRange, "DegenerateRange",
     absl::StatusCode::kInvalidArgument},
    {ErrorCode::kNoGroundTruth, "NoGroundTruth",
     absl::StatusCode::kFailedPrecondition},
    {ErrorCode::kNotVisible, "NotVisible", absl::StatusCode::kOutOfRange},
    {ErrorCode::kParseError, "ParseError", absl::StatusCode::kInvalidArgument},
    {ErrorCode::kSizeMismatch, "SizeMismatch", absl::StatusCode::kDataLoss},
    {ErrorCode::kInvalidArgument, "InvalidArgument",
     absl::StatusCode::kInvalidArgument},
    {ErrorCode::kIoError, "IoError", absl::StatusCode::kUnavailable},
}};

const CodeInfo& Info(ErrorCode code) {
  for (const CodeInfo& info : kCodes) {
    if (info.code == code) return info;
  }
  return kCodes.back();
}

}  // namespace

std::string_view ErrorCodeName(ErrorCode code) { return Info(code).name; }

absl::Status MakeError(ErrorCode code, std::string_view message) {
  const CodeInfo& info = Info(code);
  absl::Status status(info.status_code, absl::StrCat(Sv(info.name), ": ", Sv(message)));
  status.SetPayload(kPayloadUrl, absl::Cord(Sv(info.name)));
  return status;
}

std::optional<ErrorCode> ErrorCodeOf(const absl::Status& status) {
  if (status.ok()) return std::nullopt;
  auto payload = status.GetPayload(kPayloadUrl);
  if (!payload.has_value()) return std::nullopt;
  const std::string name(*payload);
  for (const CodeInfo& info : kCodes) {
    if (info.name == name) return info.code;
  }
  return std::nullopt;
}

}  // namespace gsedit
