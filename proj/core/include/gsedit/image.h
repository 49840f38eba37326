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

#ifndef GSEDIT_IMAGE_H_
#define GSEDIT_IMAGE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gsedit {

// Dense interleaved H x W x C image, row-major.
template <typename T>
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels, T fill = T{})
      : width_(width),
        height_(height),
        channels_(channels),
        data_(static_cast<size_t>(width) * height * channels, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  bool empty() const { return data_.empty(); }
  size_t size() const { return data_.size(); }

  bool SameShape(const Image& other) const {
    return width_ == other.width_ && height_ == other.height_ &&
           channels_ == other.channels_;
  }
  template <typename U>
  bool SameExtent(const Image<U>& other) const {
    return width_ == other.width() && height_ == other.height();
  }

  T& operator()(int x, int y, int c = 0) {
    return data_[(static_cast<size_t>(y) * width_ + x) * channels_ + c];
  }
  const T& operator()(int x, int y, int c = 0) const {
    return data_[(static_cast<size_t>(y) * width_ + x) * channels_ + c];
  }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<T> data_;
};

// Color images in [0, 1].
using RgbImage = Image<double>;
// 8-bit images as written to disk.
using Rgb8Image = Image<uint8_t>;
// Binary masks with values in {0, 1}.
using Mask = Image<uint8_t>;
// Scalar float images (depth in meters, alpha).
using ScalarImage = Image<double>;

inline uint8_t QuantizeUnit(double v) {
  if (!(v > 0.0)) return 0;
  if (v >= 1.0) return 255;
  return static_cast<uint8_t>(v * 255.0 + 0.5);
}

inline Rgb8Image Quantize(const Image<double>& img) {
  Rgb8Image out(img.width(), img.height(), img.channels());
  auto src = img.data();
  auto dst = out.data();
  for (size_t i = 0; i < src.size(); ++i) dst[i] = QuantizeUnit(src[i]);
  return out;
}

inline RgbImage Dequantize(const Rgb8Image& img) {
  RgbImage out(img.width(), img.height(), img.channels());
  auto src = img.data();
  auto dst = out.data();
  for (size_t i = 0; i < src.size(); ++i) dst[i] = src[i] / 255.0;
  return out;
}

inline size_t CountNonZero(const Mask& mask) {
  size_t n = 0;
  for (uint8_t v : mask.data()) n += v != 0;
  return n;
}

}  // namespace gsedit

#endif  // GSEDIT_IMAGE_H_
