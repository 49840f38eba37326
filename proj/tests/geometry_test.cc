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

#include "gsedit/geometry.h"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "gsedit/status.h"
#include "oracles.h"

namespace gsedit {
namespace {

using oracle::FromEigen;
using oracle::Matrix3;

constexpr double kPi = std::numbers::pi;

CameraFrame Camera(const Pose& pose) {
  CameraFrame cam;
  cam.intrinsics = {100, 100, 480, 320, 960, 640};
  cam.cam_to_world = pose;
  cam.camera_id = "c";
  return cam;
}

Mat3 RandomRotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  return q.normalized().toRotationMatrix();
}

TEST(WorldToCameraTest, IdentityPose) {
  const CameraFrame cam = Camera(Pose::Identity());
  EXPECT_TRUE(WorldToCamera(Vec3(0, 0, 5), cam).isApprox(Vec3(0, 0, 5)));
}

TEST(WorldToCameraTest, PureTranslation) {
  const CameraFrame cam = Camera(Pose{Mat3::Identity(), Vec3(1, 0, 0)});
  EXPECT_LT((WorldToCamera(Vec3(1, 0, 5), cam) - Vec3(0, 0, 5)).norm(), 1e-12);
}

TEST(WorldToCameraTest, YawedCameraMatchesHandMultiply) {
  const Mat3 r = YawRotation(kPi / 2);
  const Vec3 t(2, -1, 0.5);
  const CameraFrame cam = Camera(Pose{r, t});
  const Vec3 p(3.5, 4.0, -2.0);
  // R^T (p - t) written out with the explicit 90 degree matrix.
  const Matrix3 rt = {{{0, 1, 0}, {-1, 0, 0}, {0, 0, 1}}};
  const double d[3] = {p.x() - t.x(), p.y() - t.y(), p.z() - t.z()};
  const Vec3 got = WorldToCamera(p, cam);
  for (int i = 0; i < 3; ++i) {
    const double want = rt[i][0] * d[0] + rt[i][1] * d[1] + rt[i][2] * d[2];
    EXPECT_NEAR(got[i], want, 1e-12);
  }
}

TEST(ProjectPointTest, PrincipalRay) {
  auto p = ProjectPoint(Vec3(0, 0, 10), Camera(Pose::Identity()));
  ASSERT_TRUE(p.ok());
  EXPECT_DOUBLE_EQ(p->u, 480);
  EXPECT_DOUBLE_EQ(p->v, 320);
  EXPECT_DOUBLE_EQ(p->depth, 10);
}

TEST(ProjectPointTest, OffAxis) {
  auto p = ProjectPoint(Vec3(1, 0, 10), Camera(Pose::Identity()));
  ASSERT_TRUE(p.ok());
  EXPECT_DOUBLE_EQ(p->u, 490);
  EXPECT_DOUBLE_EQ(p->v, 320);
}

TEST(ProjectPointTest, BehindCamera) {
  auto p = ProjectPoint(Vec3(0, 0, -1), Camera(Pose::Identity()));
  EXPECT_EQ(ErrorCodeOf(p.status()), ErrorCode::kBehindCamera);
  EXPECT_FALSE(ProjectPoint(Vec3(0, 0, kNearPlane), Camera(Pose::Identity())).ok());
}

TEST(ProjectPointTest, UnprojectRoundTrip) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> depth(1.0, 200.0);
  std::uniform_real_distribution<double> pix(0.0, 959.0);
  std::uniform_real_distribution<double> off(-50.0, 50.0);
  for (int i = 0; i < 500; ++i) {
    const CameraFrame cam = Camera(Pose{RandomRotation(rng), Vec3(off(rng), off(rng), off(rng))});
    const double u = pix(rng), v = pix(rng) * 2.0 / 3.0, z = depth(rng);
    const Vec3 world = Unproject(u, v, z, cam);
    auto back = ProjectPoint(world, cam);
    ASSERT_TRUE(back.ok());
    EXPECT_LT((Unproject(back->u, back->v, back->depth, cam) - world).norm(), 1e-6);
    EXPECT_NEAR(back->depth, z, 1e-6);
  }
}

TEST(PoseTest, ComposeIdentity) {
  std::mt19937_64 rng(3);
  const Pose p{RandomRotation(rng), Vec3(1, 2, 3)};
  const Pose c = Compose(Pose::Identity(), p);
  EXPECT_TRUE(c.rotation.isApprox(p.rotation));
  EXPECT_TRUE(c.translation.isApprox(p.translation));
}

TEST(PoseTest, ComposeWithInverseIsIdentity) {
  std::mt19937_64 rng(4);
  const Pose p{RandomRotation(rng), Vec3(-4, 2, 9)};
  const Pose c = Compose(p, Invert(p));
  EXPECT_LT((c.rotation - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(c.translation.norm(), 1e-12);
}

TEST(PoseTest, ComposeMatchesHomogeneousProduct) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> off(-10, 10);
  for (int trial = 0; trial < 50; ++trial) {
    const Pose a{RandomRotation(rng), Vec3(off(rng), off(rng), off(rng))};
    const Pose b{RandomRotation(rng), Vec3(off(rng), off(rng), off(rng))};
    double ha[4][4] = {}, hb[4][4] = {}, hc[4][4] = {};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        ha[i][j] = a.rotation(i, j);
        hb[i][j] = b.rotation(i, j);
      }
      ha[i][3] = a.translation[i];
      hb[i][3] = b.translation[i];
    }
    ha[3][3] = hb[3][3] = 1.0;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        for (int k = 0; k < 4; ++k) hc[i][j] += ha[i][k] * hb[k][j];
      }
    }
    const Pose c = Compose(a, b);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) EXPECT_NEAR(c.rotation(i, j), hc[i][j], 1e-12);
      EXPECT_NEAR(c.translation[i], hc[i][3], 1e-12);
    }
  }
}

TEST(YawRotationTest, ZeroIsIdentity) {
  EXPECT_EQ(YawRotation(0.0), Mat3::Identity());
}

TEST(YawRotationTest, TrigTable) {
  const Mat3 r = YawRotation(0.3);
  const double c = std::cos(0.3), s = std::sin(0.3);
  const Matrix3 want = {{{c, -s, 0}, {s, c, 0}, {0, 0, 1}}};
  const Matrix3 got = FromEigen(r);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(got[i][j], want[i][j]);
  }
}

TEST(YawRotationTest, QuarterTurnMapsForwardToLeft) {
  EXPECT_LT((YawRotation(kPi / 2) * Vec3::UnitX() - Vec3::UnitY()).norm(), 1e-15);
}

TEST(WrapAngleTest, Range) {
  EXPECT_DOUBLE_EQ(WrapAngle(kPi), kPi);
  EXPECT_DOUBLE_EQ(WrapAngle(-kPi), kPi);
  EXPECT_NEAR(WrapAngle(3 * kPi / 2), -kPi / 2, 1e-12);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> a(-50, 50);
  for (int i = 0; i < 1000; ++i) {
    const double x = a(rng);
    const double w = WrapAngle(x);
    EXPECT_GT(w, -kPi);
    EXPECT_LE(w, kPi);
    EXPECT_NEAR(std::remainder(x - w, 2 * kPi), 0.0, 1e-9);
  }
}

TEST(OrthonormalTest, DetectsReflectionAndScale) {
  EXPECT_TRUE(IsOrthonormal(YawRotation(1.0)));
  EXPECT_FALSE(IsOrthonormal(2.0 * Mat3::Identity()));
  Mat3 reflect = Mat3::Identity();
  reflect(0, 0) = -1;
  EXPECT_FALSE(IsOrthonormal(reflect));
}

TEST(QuaternionTest, NormalizationPolicy) {
  auto exact = NormalizedQuaternion(Eigen::Vector4d(1, 0, 0, 0));
  ASSERT_TRUE(exact.ok());
  auto near = NormalizedQuaternion(Eigen::Vector4d(1.0005, 0, 0, 0));
  ASSERT_TRUE(near.ok());
  EXPECT_NEAR(near->norm(), 1.0, 1e-15);
  EXPECT_FALSE(NormalizedQuaternion(Eigen::Vector4d(1.1, 0, 0, 0)).ok());
  EXPECT_EQ(ErrorCodeOf(NormalizedQuaternion(Eigen::Vector4d(NAN, 0, 0, 0)).status()),
            ErrorCode::kNonFiniteValue);
}

TEST(CameraTest, Validation) {
  CameraFrame cam = Camera(Pose::Identity());
  EXPECT_TRUE(cam.Validate().ok());
  cam.intrinsics.fx = 0;
  EXPECT_FALSE(cam.Validate().ok());
  cam = Camera(Pose{2.0 * Mat3::Identity(), Vec3::Zero()});
  EXPECT_FALSE(cam.Validate().ok());
  cam = Camera(Pose::Identity());
  cam.camera_id.clear();
  EXPECT_FALSE(cam.Validate().ok());
}

}  // namespace
}  // namespace gsedit
