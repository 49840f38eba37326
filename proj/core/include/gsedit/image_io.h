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

// File helpers and the on-disk image encodings: 8-bit PNG (gray or RGB) and
// single-channel little-endian PFM.

#ifndef GSEDIT_IMAGE_IO_H_
#define GSEDIT_IMAGE_IO_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gsedit/image.h"

namespace gsedit {

// IoError when the file cannot be opened or read.
absl::StatusOr<std::string> ReadFile(const std::string& path);

// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a partial file.
absl::Status WriteFileAtomic(const std::string& path, std::string_view bytes);

// 1 (gray) or 3 (RGB) channel images. Encoding is deterministic: no
// timestamps or text chunks, fixed compression settings.
absl::StatusOr<std::string> EncodePng(const Image<uint8_t>& image);
// Palette, 16-bit and alpha inputs are reduced to 8-bit gray or RGB.
absl::StatusOr<Image<uint8_t>> DecodePng(std::string_view bytes);

// Masks in {0, 1} are stored as {0, 255}.
absl::StatusOr<std::string> EncodeMaskPng(const Mask& mask);
// Any nonzero byte reads as 1.
absl::StatusOr<Mask> DecodeMaskPng(std::string_view bytes);

// "Pf" header, negative scale (little-endian), rows bottom to top, float32.
std::string EncodePfm(const ScalarImage& image);
absl::StatusOr<ScalarImage> DecodePfm(std::string_view bytes);

}  // namespace gsedit

#endif  // GSEDIT_IMAGE_IO_H_
