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

#include "gsedit/ply.h"

#include <cmath>
#include <cstring>
#include <random>

#include <gtest/gtest.h>

#include "gsedit/status.h"
#include "oracles.h"

namespace gsedit {
namespace {

constexpr char kLinearAscii[] =
    "ply\n"
    "format ascii 1.0\n"
    "element vertex 1\n"
    "property float x\nproperty float y\nproperty float z\n"
    "property float red\nproperty float green\nproperty float blue\n"
    "property float opacity\n"
    "property float scale_0\nproperty float scale_1\nproperty float scale_2\n"
    "property float rot_0\nproperty float rot_1\nproperty float rot_2\nproperty float rot_3\n"
    "end_header\n"
    "1.5 -2 3 0.25 0.5 0.75 0.6 0.1 0.2 0.3 1 0 0 0\n";

std::string SplatAscii(double f_dc_0, double q_w = 2.0) {
  return "ply\nformat ascii 1.0\nelement vertex 1\n"
         "property float x\nproperty float y\nproperty float z\n"
         "property float f_dc_0\nproperty float f_dc_1\nproperty float f_dc_2\n"
         "property float opacity\n"
         "property float scale_0\nproperty float scale_1\nproperty float scale_2\n"
         "property float rot_0\nproperty float rot_1\nproperty float rot_2\nproperty float rot_3\n"
         "end_header\n"
         "0 0 0 " + std::to_string(f_dc_0) + " 0 0 0 0 0 0 " + std::to_string(q_w) + " 0 0 0\n";
}

TEST(PlyTest, LinearAsciiPassthrough) {
  auto cloud = LoadAsset(kLinearAscii);
  ASSERT_TRUE(cloud.ok()) << cloud.status();
  ASSERT_EQ(cloud->size(), 1u);
  const Gaussian3D& g = cloud->gaussians[0];
  EXPECT_EQ(cloud->frame, CoordinateFrame::kLocal);
  EXPECT_EQ(g.mean, Vec3(1.5, -2, 3));
  EXPECT_EQ(g.color, Vec3(0.25, 0.5, 0.75));
  EXPECT_DOUBLE_EQ(g.opacity, 0.6);
  EXPECT_DOUBLE_EQ(g.scale.y(), 0.2);
  EXPECT_DOUBLE_EQ(g.rotation.w(), 1.0);
}

TEST(PlyTest, SplatDecoding) {
  auto zero = LoadAsset(SplatAscii(0.0));
  ASSERT_TRUE(zero.ok()) << zero.status();
  const Gaussian3D& g = zero->gaussians[0];
  EXPECT_EQ(g.color, Vec3(0.5, 0.5, 0.5));
  EXPECT_DOUBLE_EQ(g.opacity, 0.5);     // sigmoid(0)
  EXPECT_EQ(g.scale, Vec3::Ones());     // exp(0)
  EXPECT_DOUBLE_EQ(g.rotation.w(), 1);  // normalized from 2
  auto bright = LoadAsset(SplatAscii(1.7754));
  ASSERT_TRUE(bright.ok());
  EXPECT_EQ(bright->gaussians[0].color.x(), 1.0);
}

TEST(PlyTest, ConventionOverride) {
  auto as_linear = LoadAsset(SplatAscii(0.0), PlyConvention::kLinear);
  // Linear reading of a zero scale is degenerate.
  EXPECT_EQ(ErrorCodeOf(as_linear.status()), ErrorCode::kDegenerateGaussian);
}

TEST(PlyTest, RoundTripBothConventionsAndEncodings) {
  std::mt19937_64 rng(5);
  GaussianCloud cloud = oracle::RandomCloud(rng, 64, 2.0);
  for (PlyConvention conv : {PlyConvention::kLinear, PlyConvention::kSplat}) {
    for (PlyEncoding enc : {PlyEncoding::kAscii, PlyEncoding::kBinaryLittleEndian}) {
      auto back = LoadAsset(EncodeAsset(cloud, conv, enc));
      ASSERT_TRUE(back.ok()) << back.status();
      ASSERT_EQ(back->size(), cloud.size());
      for (size_t i = 0; i < cloud.size(); ++i) {
        const Gaussian3D& a = cloud.gaussians[i];
        const Gaussian3D& b = back->gaussians[i];
        EXPECT_LT((a.mean - b.mean).norm(), 1e-5);
        EXPECT_LT((a.scale - b.scale).cwiseQuotient(a.scale).cwiseAbs().maxCoeff(), 1e-5);
        EXPECT_NEAR(a.opacity, b.opacity, 1e-5);
        EXPECT_LT((a.color - b.color).cwiseAbs().maxCoeff(), 1e-5);
        EXPECT_NEAR(std::abs(a.rotation.dot(b.rotation)), 1.0, 1e-6);
      }
    }
  }
}

TEST(PlyTest, BinaryWithPrecedingElement) {
  std::string bytes =
      "ply\nformat binary_little_endian 1.0\n"
      "element extra 2\nproperty uchar k\n"
      "element vertex 1\n"
      "property float x\nproperty float y\nproperty float z\n"
      "property uchar red\nproperty uchar green\nproperty uchar blue\n"
      "property float opacity\n"
      "property float scale_0\nproperty float scale_1\nproperty float scale_2\n"
      "property float rot_0\nproperty float rot_1\nproperty float rot_2\nproperty float rot_3\n"
      "end_header\n";
  bytes += std::string("\x07\x09", 2);
  auto put = [&](float f) { bytes.append(reinterpret_cast<const char*>(&f), 4); };
  put(1);
  put(2);
  put(3);
  bytes += std::string("\xff\x00\x33", 3);
  put(0.5f);
  put(1);
  put(1);
  put(1);
  put(1);
  put(0);
  put(0);
  put(0);
  auto cloud = LoadAsset(bytes);
  ASSERT_TRUE(cloud.ok()) << cloud.status();
  EXPECT_EQ(cloud->gaussians[0].mean, Vec3(1, 2, 3));
  EXPECT_DOUBLE_EQ(cloud->gaussians[0].color.x(), 1.0);
  EXPECT_DOUBLE_EQ(cloud->gaussians[0].color.z(), 0x33 / 255.0);
}

TEST(PlyTest, MalformedInputs) {
  EXPECT_EQ(ErrorCodeOf(LoadAsset("not a ply").status()), ErrorCode::kMalformedPly);
  std::string missing = kLinearAscii;
  missing.replace(missing.find("property float opacity\n"), 23, "");
  EXPECT_EQ(ErrorCodeOf(LoadAsset(missing).status()), ErrorCode::kMalformedPly);
  std::string truncated = kLinearAscii;
  truncated.resize(truncated.size() - 8);
  EXPECT_EQ(ErrorCodeOf(LoadAsset(truncated).status()), ErrorCode::kMalformedPly);
  std::string nan = kLinearAscii;
  nan.replace(nan.find("1.5 -2"), 3, "nan");
  EXPECT_EQ(ErrorCodeOf(LoadAsset(nan).status()), ErrorCode::kNonFiniteValue);
  std::string bad_quat = kLinearAscii;
  bad_quat.replace(bad_quat.rfind("1 0 0 0"), 7, "2 0 0 0");
  EXPECT_EQ(ErrorCodeOf(LoadAsset(bad_quat).status()), ErrorCode::kMalformedPly);
  EXPECT_EQ(ErrorCodeOf(LoadAssetFile("/nonexistent/asset.ply").status()),
            ErrorCode::kIoError);
}

TEST(PlyTest, ParseConventionNames) {
  EXPECT_EQ(*ParsePlyConvention("linear"), PlyConvention::kLinear);
  EXPECT_EQ(*ParsePlyConvention("splat"), PlyConvention::kSplat);
  EXPECT_EQ(*ParsePlyConvention("auto"), PlyConvention::kAuto);
  EXPECT_FALSE(ParsePlyConvention("bogus").ok());
}

}  // namespace
}  // namespace gsedit
