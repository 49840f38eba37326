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

#include "gsedit/image_io.h"

#include <png.h>
#include <unistd.h>

#include <atomic>
#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "gsedit/status.h"
#include "string_compat.h"

namespace gsedit {
namespace {

static_assert(std::endian::native == std::endian::little,
              "on-disk encodings assume a little-endian host");

std::atomic<uint64_t> temp_counter{0};

}  // namespace

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return MakeError(ErrorCode::kIoError, absl::StrCat("cannot open ", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return MakeError(ErrorCode::kIoError, absl::StrCat("cannot read ", path));
  return std::move(ss).str();
}

absl::Status WriteFileAtomic(const std::string& path, std::string_view bytes) {
  const std::string temp = absl::StrCat(path, ".tmp.", ::getpid(), ".",
                                        temp_counter.fetch_add(1));
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) {
      return MakeError(ErrorCode::kIoError, absl::StrCat("cannot create ", temp));
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(temp, ignored);
      return MakeError(ErrorCode::kIoError, absl::StrCat("cannot write ", temp));
    }
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(temp, ignored);
    return MakeError(ErrorCode::kIoError,
                     absl::StrCat("cannot rename onto ", path, ": ", ec.message()));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::string> EncodePng(const Image<uint8_t>& image) {
  if (image.channels() != 1 && image.channels() != 3) {
    return MakeError(ErrorCode::kInvalidArgument,
                     absl::StrCat("PNG needs 1 or 3 channels, got ", image.channels()));
  }
  if (image.width() <= 0 || image.height() <= 0) {
    return MakeError(ErrorCode::kInvalidArgument, "empty image");
  }
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width());
  png.height = static_cast<png_uint_32>(image.height());
  png.format = image.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  const png_int_32 stride = image.width() * image.channels();
  if (!png_image_write_to_memory(&png, nullptr, &size, 0, image.data().data(),
                                 stride, nullptr)) {
    return MakeError(ErrorCode::kIoError, absl::StrCat("PNG encode: ", png.message));
  }
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&png, out.data(), &size, 0, image.data().data(),
                                 stride, nullptr)) {
    return MakeError(ErrorCode::kIoError, absl::StrCat("PNG encode: ", png.message));
  }
  out.resize(size);
  return out;
}

absl::StatusOr<Image<uint8_t>> DecodePng(std::string_view bytes) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size())) {
    return MakeError(ErrorCode::kParseError, absl::StrCat("PNG decode: ", png.message));
  }
  const bool color = (png.format & PNG_FORMAT_FLAG_COLOR) != 0;
  png.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  Image<uint8_t> out(static_cast<int>(png.width), static_cast<int>(png.height),
                     color ? 3 : 1);
  const png_color white = {255, 255, 255};
  if (!png_image_finish_read(&png, &white, out.data().data(),
                             static_cast<png_int_32>(png.width) * out.channels(),
                             nullptr)) {
    png_image_free(&png);
    return MakeError(ErrorCode::kParseError, absl::StrCat("PNG decode: ", png.message));
  }
  return out;
}

absl::StatusOr<std::string> EncodeMaskPng(const Mask& mask) {
  if (mask.channels() != 1) {
    return MakeError(ErrorCode::kInvalidArgument, "mask must have one channel");
  }
  Image<uint8_t> gray(mask.width(), mask.height(), 1);
  auto src = mask.data();
  auto dst = gray.data();
  for (size_t i = 0; i < src.size(); ++i) dst[i] = src[i] ? 255 : 0;
  return EncodePng(gray);
}

absl::StatusOr<Mask> DecodeMaskPng(std::string_view bytes) {
  GSEDIT_ASSIGN_OR_RETURN(Image<uint8_t> gray, DecodePng(bytes));
  if (gray.channels() != 1) {
    return MakeError(ErrorCode::kParseError, "mask PNG is not grayscale");
  }
  for (uint8_t& v : gray.data()) v = v ? 1 : 0;
  return gray;
}

std::string EncodePfm(const ScalarImage& image) {
  std::string out = absl::StrCat("Pf\n", image.width(), " ", image.height(), "\n-1.0\n");
  const size_t header = out.size();
  out.resize(header + static_cast<size_t>(image.width()) * image.height() * 4);
  char* p = out.data() + header;
  for (int y = image.height() - 1; y >= 0; --y) {
    for (int x = 0; x < image.width(); ++x) {
      const float v = static_cast<float>(image(x, y));
      std::memcpy(p, &v, 4);
      p += 4;
    }
  }
  return out;
}

absl::StatusOr<ScalarImage> DecodePfm(std::string_view bytes) {
  // The header is three newline-terminated lines.
  size_t pos = 0;
  auto next_line = [&]() -> std::optional<std::string_view> {
    const size_t end = bytes.find('\n', pos);
    if (end == std::string_view::npos) return std::nullopt;
    std::string_view line = bytes.substr(pos, end - pos);
    pos = end + 1;
    return line;
  };
  auto magic = next_line();
  auto dims = next_line();
  auto scale_line = next_line();
  if (!magic || !dims || !scale_line) {
    return MakeError(ErrorCode::kParseError, "truncated PFM header");
  }
  if (*magic != "Pf") {
    return MakeError(ErrorCode::kParseError, "only single-channel Pf files are supported");
  }
  std::vector<absl::string_view> wh =
      absl::StrSplit(Sv(*dims), ' ', absl::SkipWhitespace());
  int width = 0, height = 0;
  double scale = 0.0;
  if (wh.size() != 2 || !absl::SimpleAtoi(wh[0], &width) ||
      !absl::SimpleAtoi(wh[1], &height) || width <= 0 || height <= 0 ||
      !absl::SimpleAtod(Sv(*scale_line), &scale) || scale == 0.0) {
    return MakeError(ErrorCode::kParseError, "bad PFM header");
  }
  const size_t need = static_cast<size_t>(width) * height * 4;
  if (bytes.size() - pos != need) {
    return MakeError(ErrorCode::kSizeMismatch,
                     absl::StrCat("PFM payload has ", bytes.size() - pos,
                                  " bytes, expected ", need));
  }
  const bool big_endian = scale > 0.0;
  ScalarImage out(width, height, 1);
  const char* p = bytes.data() + pos;
  for (int y = height - 1; y >= 0; --y) {
    for (int x = 0; x < width; ++x) {
      uint32_t bits;
      std::memcpy(&bits, p, 4);
      if (big_endian) bits = __builtin_bswap32(bits);
      out(x, y) = static_cast<double>(std::bit_cast<float>(bits));
      p += 4;
    }
  }
  return out;
}

}  // namespace gsedit
