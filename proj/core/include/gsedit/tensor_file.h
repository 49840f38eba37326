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

// Raw float32 tensor container:
//
//   8 bytes   magic "GSETNSR1"
//   4 bytes   little-endian u32 header length L
//   L bytes   JSON {"channel_names": [...], "dtype": "f32", "shape": [...]}
//   payload   row-major little-endian float32, product(shape) * 4 bytes
//
// The channel axis is axis 1 when the shape has rank >= 2, otherwise axis 0.

#ifndef GSEDIT_TENSOR_FILE_H_
#define GSEDIT_TENSOR_FILE_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "gsedit/editing.h"

namespace gsedit {

inline constexpr std::string_view kTensorMagic = "GSETNSR1";

struct Tensor {
  std::vector<int64_t> shape;
  std::vector<std::string> channel_names;
  std::vector<float> values;
};

// InvalidArgument when values or channel names disagree with the shape.
absl::StatusOr<std::string> EncodeTensor(const Tensor& tensor);

// ParseError for a bad magic or header, SizeMismatch when the payload is
// shorter or longer than the header declares.
absl::StatusOr<Tensor> DecodeTensor(std::string_view bytes);

Tensor StackToTensor(const ChannelStack& stack);
absl::StatusOr<ChannelStack> TensorToStack(const Tensor& tensor);

}  // namespace gsedit

#endif  // GSEDIT_TENSOR_FILE_H_
