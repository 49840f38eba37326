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

#include "gsedit/tensor_file.h"

#include <cstring>

#include "absl/strings/str_cat.h"
#include "gsedit/status.h"
#include <nlohmann/json.hpp>

namespace gsedit {
namespace {

using nlohmann::json;

int ChannelAxis(size_t rank) { return rank >= 2 ? 1 : 0; }

absl::StatusOr<size_t> ElementCount(const std::vector<int64_t>& shape) {
  size_t n = 1;
  for (int64_t d : shape) {
    if (d < 0) return MakeError(ErrorCode::kParseError, "negative dimension");
    n *= static_cast<size_t>(d);
  }
  return n;
}

absl::Status CheckChannels(const Tensor& t, ErrorCode code) {
  if (t.channel_names.empty()) return absl::OkStatus();
  if (t.shape.empty() ||
      t.shape[ChannelAxis(t.shape.size())] !=
          static_cast<int64_t>(t.channel_names.size())) {
    return MakeError(code, "channel_names do not match the channel axis");
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<std::string> EncodeTensor(const Tensor& tensor) {
  GSEDIT_ASSIGN_OR_RETURN(const size_t count, ElementCount(tensor.shape));
  if (count != tensor.values.size()) {
    return MakeError(ErrorCode::kInvalidArgument,
                     absl::StrCat("shape holds ", count, " values, got ",
                                  tensor.values.size()));
  }
  GSEDIT_RETURN_IF_ERROR(CheckChannels(tensor, ErrorCode::kInvalidArgument));
  json header = {{"dtype", "f32"},
                 {"shape", tensor.shape},
                 {"channel_names", tensor.channel_names}};
  const std::string text = header.dump();
  const uint32_t length = static_cast<uint32_t>(text.size());
  std::string out(kTensorMagic);
  out.append(reinterpret_cast<const char*>(&length), 4);
  out += text;
  const size_t payload = out.size();
  out.resize(payload + count * 4);
  std::memcpy(out.data() + payload, tensor.values.data(), count * 4);
  return out;
}

absl::StatusOr<Tensor> DecodeTensor(std::string_view bytes) {
  if (bytes.size() < kTensorMagic.size() + 4 ||
      bytes.substr(0, kTensorMagic.size()) != kTensorMagic) {
    return MakeError(ErrorCode::kParseError, "not a tensor file");
  }
  uint32_t length = 0;
  std::memcpy(&length, bytes.data() + kTensorMagic.size(), 4);
  const size_t header_begin = kTensorMagic.size() + 4;
  if (bytes.size() - header_begin < length) {
    return MakeError(ErrorCode::kSizeMismatch, "header extends past end of file");
  }
  Tensor t;
  try {
    const json header = json::parse(bytes.substr(header_begin, length));
    if (header.at("dtype").get<std::string>() != "f32") {
      return MakeError(ErrorCode::kParseError, "unsupported dtype");
    }
    t.shape = header.at("shape").get<std::vector<int64_t>>();
    if (header.contains("channel_names")) {
      t.channel_names = header.at("channel_names").get<std::vector<std::string>>();
    }
  } catch (const json::exception& e) {
    return MakeError(ErrorCode::kParseError, absl::StrCat("tensor header: ", e.what()));
  }
  GSEDIT_RETURN_IF_ERROR(CheckChannels(t, ErrorCode::kParseError));
  GSEDIT_ASSIGN_OR_RETURN(const size_t count, ElementCount(t.shape));
  const size_t payload = header_begin + length;
  if (bytes.size() - payload != count * 4) {
    return MakeError(ErrorCode::kSizeMismatch,
                     absl::StrCat("payload has ", bytes.size() - payload,
                                  " bytes, header declares ", count * 4));
  }
  t.values.resize(count);
  std::memcpy(t.values.data(), bytes.data() + payload, count * 4);
  return t;
}

Tensor StackToTensor(const ChannelStack& stack) {
  Tensor t;
  t.shape = {stack.frames, ChannelStack::kChannels, stack.height, stack.width};
  t.channel_names = ChannelStack::ChannelNames();
  t.values = stack.values;
  return t;
}

absl::StatusOr<ChannelStack> TensorToStack(const Tensor& tensor) {
  if (tensor.shape.size() != 4 || tensor.shape[1] != ChannelStack::kChannels) {
    return MakeError(ErrorCode::kShapeMismatch, "expected N x 14 x H x W");
  }
  ChannelStack s;
  s.frames = static_cast<int>(tensor.shape[0]);
  s.height = static_cast<int>(tensor.shape[2]);
  s.width = static_cast<int>(tensor.shape[3]);
  s.values = tensor.values;
  return s;
}

}  // namespace gsedit
