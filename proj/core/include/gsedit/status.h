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

#ifndef GSEDIT_STATUS_H_
#define GSEDIT_STATUS_H_

#include <optional>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace gsedit {

// Domain error kinds. Every error returned by the library carries one of
// these as a status payload so callers can branch on the kind without
// parsing messages.
enum class ErrorCode {
  kBehindCamera,
  kWrongFrame,
  kMalformedPly,
  kNonFiniteValue,
  kDegenerateGaussian,
  kMissingCamera,
  kObjectAbsent,
  kUnknownObject,
  kDuplicateObjectId,
  kEmptyAsset,
  kDegenerateExtent,
  kMissingAsset,
  kMissingReference,
  kDimensionNotDivisible,
  kFullyBehindCamera,
  kShapeMismatch,
  kNotFullyVisible,
  kCropExceedsImage,
  kNoFreeRegion,
  kDegenerateRange,
  kNoGroundTruth,
  kNotVisible,
  kParseError,
  kSizeMismatch,
  kInvalidArgument,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

// Builds a status whose message is "<Name>: <message>" and whose payload
// records `code`.
absl::Status MakeError(ErrorCode code, std::string_view message);

// Returns the domain error kind of `status`, or nullopt for OK statuses and
// statuses that did not originate from MakeError.
std::optional<ErrorCode> ErrorCodeOf(const absl::Status& status);

}  // namespace gsedit

#define GSEDIT_STATUS_CONCAT_INNER_(a, b) a##b
#define GSEDIT_STATUS_CONCAT_(a, b) GSEDIT_STATUS_CONCAT_INNER_(a, b)

#define GSEDIT_RETURN_IF_ERROR(expr)            \
  do {                                          \
    ::absl::Status gsedit_status_ = (expr);     \
    if (!gsedit_status_.ok()) return gsedit_status_; \
  } while (0)

#define GSEDIT_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, expr) \
  auto tmp = (expr);                                  \
  if (!tmp.ok()) return tmp.status();                 \
  lhs = std::move(tmp).value()

#define GSEDIT_ASSIGN_OR_RETURN(lhs, expr) \
  GSEDIT_ASSIGN_OR_RETURN_IMPL_(           \
      GSEDIT_STATUS_CONCAT_(gsedit_statusor_, __LINE__), lhs, expr)

#endif  // GSEDIT_STATUS_H_
