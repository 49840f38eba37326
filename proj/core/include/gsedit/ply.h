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

// Gaussian asset PLY files.
//
// Vertex properties: x y z, rot_0..rot_3 (w x y z), scale_0..scale_2,
// opacity, and either f_dc_0..f_dc_2 (degree-0 spherical harmonics) or
// red green blue (uchar in [0, 255] or float in [0, 1]).
//
// Two value conventions exist:
//   linear - scale is a standard deviation, opacity is in (0, 1].
//   splat  - scale is log(std dev), opacity is a logit; this is what
//            Gaussian splatting trainers export.
// kAuto picks the convention from a header comment ("comment convention
// linear" / "comment convention splat") or, absent one, treats files carrying
// f_dc_* with float scale_* properties as splat exports.

#ifndef GSEDIT_PLY_H_
#define GSEDIT_PLY_H_

#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "gsedit/gaussians.h"

namespace gsedit {

enum class PlyConvention { kAuto, kLinear, kSplat };

enum class PlyEncoding { kAscii, kBinaryLittleEndian };

// Degree-0 real spherical harmonic basis constant.
inline constexpr double kShC0 = 0.28209479177387814;

absl::StatusOr<PlyConvention> ParsePlyConvention(std::string_view name);

// Errors: MalformedPly, NonFiniteValue, DegenerateGaussian.
absl::StatusOr<GaussianCloud> LoadAsset(std::string_view bytes,
                                        PlyConvention convention =
                                            PlyConvention::kAuto);

absl::StatusOr<GaussianCloud> LoadAssetFile(const std::string& path,
                                            PlyConvention convention =
                                                PlyConvention::kAuto);

// Writes float properties with an explicit convention comment. In the splat
// convention colors go to f_dc_* and opacity is clamped below 1 - 1e-7
// before taking the logit.
std::string EncodeAsset(const GaussianCloud& cloud, PlyConvention convention,
                        PlyEncoding encoding = PlyEncoding::kBinaryLittleEndian);

}  // namespace gsedit

#endif  // GSEDIT_PLY_H_
