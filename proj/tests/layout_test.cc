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

#include "gsedit/layout.h"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "gsedit/status.h"
#include "oracles.h"
#include "scenes.h"

namespace gsedit {
namespace {

using oracle::BruteForceClips;
using oracle::LookAtCamera;
using oracle::MakeBox;
using oracle::RayBoxDepth;
using oracle::StaticLayout;
using oracle::StaticTrack;

TEST(BoxCornersTest, UnitCube) {
  for (const Vec3& c : BoxCorners(Box3D{})) {
    for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(std::abs(c[i]), 0.5);
  }
  // Documented order: bottom ring then top ring, front-left first.
  const auto corners = BoxCorners(Box3D{});
  EXPECT_EQ(corners[0], Vec3(0.5, 0.5, -0.5));
  EXPECT_EQ(corners[4], Vec3(0.5, 0.5, 0.5));
}

TEST(BoxCornersTest, MatchesRotateThenTranslate) {
  const Box3D box = MakeBox(Vec3(10, 5, 1), Vec3(4, 2, 1.5), 0.3);
  const double c = std::cos(0.3), s = std::sin(0.3);
  for (const Vec3& p : BoxCorners(box)) {
    // Undo by hand and check the local coordinates sit on the half extents.
    const double dx = p.x() - 10, dy = p.y() - 5;
    EXPECT_NEAR(std::abs(c * dx + s * dy), 2.0, 1e-9);
    EXPECT_NEAR(std::abs(-s * dx + c * dy), 1.0, 1e-9);
    EXPECT_NEAR(std::abs(p.z() - 1), 0.75, 1e-9);
  }
}

TEST(BoxTest, Validate) {
  EXPECT_TRUE(MakeBox(Vec3::Zero(), Vec3(1, 1, 1)).Validate().ok());
  EXPECT_FALSE(MakeBox(Vec3::Zero(), Vec3(0, 1, 1)).Validate().ok());
  EXPECT_FALSE(MakeBox(Vec3(NAN, 0, 0), Vec3(1, 1, 1)).Validate().ok());
}

TEST(DepthBoxesTest, EmptyLayoutIsZero) {
  auto depth = RenderDepthBoxes(StaticLayout(1), 0, "cam");
  ASSERT_TRUE(depth.ok());
  for (double v : depth->data()) EXPECT_EQ(v, 0.0);
}

TEST(DepthBoxesTest, MissingCamera) {
  auto depth = RenderDepthBoxes(StaticLayout(1), 0, "side");
  EXPECT_EQ(ErrorCodeOf(depth.status()), ErrorCode::kMissingCamera);
  EXPECT_NE(depth.status().message().find("side"), std::string::npos);
}

TEST(DepthBoxesTest, FrontoParallelFaceAtTenMeters) {
  SceneLayout layout = StaticLayout(1);
  layout.tracks.push_back(StaticTrack("a", MakeBox(Vec3(10.5, 0, 0), Vec3(1, 4, 3)), 0, 0));
  auto depth = RenderDepthBoxes(layout, 0, "cam");
  ASSERT_TRUE(depth.ok());
  // Near face spans u in 160 +- 40, v in 120 +- 30.
  int covered = 0;
  for (int v = 92; v <= 148; ++v) {
    for (int u = 122; u <= 198; ++u) {
      EXPECT_NEAR((*depth)(u, v), 10.0, 1e-4) << u << "," << v;
      ++covered;
    }
  }
  EXPECT_GT(covered, 4000);
  for (double d : depth->data()) {
    if (d != 0.0) EXPECT_NEAR(d, 10.0, 1e-4);
  }
}

TEST(DepthBoxesTest, NearestBoxWins) {
  SceneLayout layout = StaticLayout(1);
  layout.tracks.push_back(StaticTrack("far", MakeBox(Vec3(10.5, 0, 0), Vec3(1, 4, 3)), 0, 0));
  layout.tracks.push_back(StaticTrack("near", MakeBox(Vec3(5.5, 0.5, 0), Vec3(1, 1, 1)), 0, 0));
  auto depth = RenderDepthBoxes(layout, 0, "cam");
  ASSERT_TRUE(depth.ok());
  // Camera x is world -y, so the near box is left of center.
  EXPECT_NEAR((*depth)(140, 120), 5.0, 1e-9);
  EXPECT_NEAR((*depth)(185, 120), 10.0, 1e-9);
}

TEST(DepthBoxesTest, BehindCameraBoxIsSkipped) {
  SceneLayout layout = StaticLayout(1);
  layout.tracks.push_back(StaticTrack("a", MakeBox(Vec3(-5, 0, 0), Vec3(2, 2, 2)), 0, 0));
  auto depth = RenderDepthBoxes(layout, 0, "cam");
  ASSERT_TRUE(depth.ok());
  for (double v : depth->data()) EXPECT_EQ(v, 0.0);
}

TEST(DepthBoxesTest, MatchesRayOracleOnRandomBoxes) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    SceneLayout layout;
    layout.num_frames = 1;
    const CameraFrame cam =
        LookAtCamera(Vec3(0, 0, 2), Vec3(10, 0, 0.5), 160, 120, 110.0, 0, "cam");
    layout.cameras[{0, "cam"}] = cam;
    const Box3D box = MakeBox(Vec3(6 + 20 * u(rng), -4 + 8 * u(rng), -1 + 2 * u(rng)),
                              Vec3(1 + 4 * u(rng), 1 + 2 * u(rng), 1 + 1.5 * u(rng)),
                              std::numbers::pi * (2 * u(rng) - 1));
    layout.tracks.push_back(StaticTrack("a", box, 0, 0));
    auto depth = RenderDepthBoxes(layout, 0, "cam");
    ASSERT_TRUE(depth.ok());
    int interior = 0;
    for (int v = 1; v < 119; ++v) {
      for (int x = 1; x < 159; ++x) {
        int hits = 0;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) hits += RayBoxDepth(cam, x + dx, v + dy, box) > 0;
        }
        const double want = RayBoxDepth(cam, x, v, box);
        if (hits == 9) {
          ++interior;
          EXPECT_NEAR((*depth)(x, v), want, 0.005 * want) << "trial " << trial;
        } else if (hits == 0) {
          EXPECT_EQ((*depth)(x, v), 0.0) << "trial " << trial;
        }
      }
    }
    EXPECT_GT(interior, 0);
  }
}

TEST(EdgeMaskTest, EmptyAndBehind) {
  SceneLayout layout = StaticLayout(1);
  auto empty = RenderEdgeMask(layout, 0, "cam");
  ASSERT_TRUE(empty.ok());
  EXPECT_EQ(CountNonZero(*empty), 0u);
  layout.tracks.push_back(StaticTrack("a", MakeBox(Vec3(-8, 0, 0), Vec3(2, 2, 2)), 0, 0));
  EXPECT_EQ(CountNonZero(*RenderEdgeMask(layout, 0, "cam")), 0u);
}

TEST(EdgeMaskTest, PixelsLieOnProjectedEdges) {
  SceneLayout layout = StaticLayout(1);
  const Box3D box = MakeBox(Vec3(15, 1, -0.5), Vec3(4.5, 1.9, 1.5), 0.4);
  layout.tracks.push_back(StaticTrack("a", box, 0, 0));
  const CameraFrame& cam = layout.cameras.at({0, "cam"});
  auto mask = RenderEdgeMask(layout, 0, "cam", 2.0);
  ASSERT_TRUE(mask.ok());
  const size_t count = CountNonZero(*mask);
  EXPECT_GT(count, 0u);
  EXPECT_LT(count, 0.05 * 320 * 240);

  std::vector<Vec2> px;
  for (const Vec3& c : BoxCorners(box)) {
    const Vec3 p = WorldToCamera(c, cam);
    px.emplace_back(200 * p.x() / p.z() + 160, 200 * p.y() / p.z() + 120);
  }
  auto distance = [&](const Vec2& q, int a, int b) {
    const Vec2 d = px[b] - px[a];
    const double t = std::clamp((q - px[a]).dot(d) / d.squaredNorm(), 0.0, 1.0);
    return (q - (px[a] + t * d)).norm();
  };
  for (int y = 0; y < 240; ++y) {
    for (int x = 0; x < 320; ++x) {
      if (!(*mask)(x, y)) continue;
      double best = HUGE_VAL;
      for (const auto& e : kBoxEdges) best = std::min(best, distance(Vec2(x, y), e[0], e[1]));
      EXPECT_LE(best, 1.0 + 1e-9);
    }
  }
  for (const auto& e : kBoxEdges) {
    const Vec2 mid = 0.5 * (px[e[0]] + px[e[1]]);
    EXPECT_TRUE((*mask)(static_cast<int>(std::lround(mid.x())), static_cast<int>(std::lround(mid.y()))));
  }
}

TEST(NeighborsTest, RadiusBoundary) {
  SceneLayout layout = StaticLayout(1);
  layout.tracks.push_back(StaticTrack("a", MakeBox(Vec3(10, 0, 0), Vec3(1, 1, 1)), 0, 0));
  EXPECT_EQ(*NeighborsWithin(layout, 0, "a", 3.0), 0);
  layout.tracks.push_back(StaticTrack("b", MakeBox(Vec3(10, 2.9, 5), Vec3(1, 1, 1)), 0, 0));
  EXPECT_EQ(*NeighborsWithin(layout, 0, "a", 3.0), 1);
  layout.tracks.back().boxes[0].center.y() = 3.1;
  EXPECT_EQ(*NeighborsWithin(layout, 0, "a", 3.0), 0);
  EXPECT_EQ(ErrorCodeOf(NeighborsWithin(layout, 0, "zz", 3.0).status()), ErrorCode::kObjectAbsent);
}

TEST(SelectClipsTest, EmptyLayout) {
  EXPECT_TRUE(SelectClips(StaticLayout(12), "cam").empty());
}

TEST(SelectClipsTest, IsolatedObjectGivesThreeWindows) {
  SceneLayout layout = StaticLayout(12);
  layout.tracks.push_back(StaticTrack("a", MakeBox(Vec3(8, 0, 0), Vec3(4, 2, 1.5)), 0, 11));
  const std::vector<ClipWindow> want = {{"a", 0}, {"a", 1}, {"a", 2}};
  EXPECT_EQ(SelectClips(layout, "cam"), want);
  EXPECT_EQ(BruteForceClips(layout, "cam", 10, 40, 2, 3.0), want);
}

TEST(SelectClipsTest, TransientNeighborExcludesWindows) {
  SceneLayout layout = StaticLayout(12);
  layout.tracks.push_back(StaticTrack("a", MakeBox(Vec3(8, 0, 0), Vec3(4, 2, 1.5)), 0, 11));
  layout.tracks.push_back(StaticTrack("b", MakeBox(Vec3(8, 2.5, 0), Vec3(4, 2, 1.5)), 4, 6));
  ClipSelectionParams params;
  params.max_neighbors = 1;
  EXPECT_TRUE(SelectClips(layout, "cam", params).empty());
  EXPECT_TRUE(BruteForceClips(layout, "cam", 10, 40, 1, 3.0).empty());
  params.num_frames = 4;
  const std::vector<ClipWindow> got = SelectClips(layout, "cam", params);
  EXPECT_EQ(got, BruteForceClips(layout, "cam", 4, 40, 1, 3.0));
  EXPECT_EQ(got, (std::vector<ClipWindow>{{"a", 0}, {"a", 7}, {"a", 8}}));
}

TEST(SelectClipsTest, RandomLayoutsMatchBruteForce) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    SceneLayout layout;
    layout.num_frames = 12;
    for (int f = 0; f < 12; ++f) {
      layout.cameras[{f, "cam"}] = oracle::ForwardCamera(Vec3(0.3 * f, 0, 1.5), f);
    }
    const int n = 1 + static_cast<int>(u(rng) * 5);
    for (int i = 0; i < n; ++i) {
      ObjectTrack t;
      t.object_id = "o" + std::to_string(i);
      const Vec3 start(12 + 20 * u(rng), -8 + 16 * u(rng), 0.75);
      const Vec3 vel(u(rng) - 0.5, u(rng) - 0.5, 0);
      const int first = static_cast<int>(u(rng) * 3);
      const int last = 9 + static_cast<int>(u(rng) * 3);
      for (int f = first; f <= last; ++f) {
        t.boxes[f] = MakeBox(start + f * vel, Vec3(4, 1.8, 1.5), u(rng));
      }
      layout.tracks.push_back(t);
    }
    for (int frames : {3, 10}) {
      for (double h : {10.0, 40.0}) {
        ClipSelectionParams params{frames, h, 2, 3.0};
        EXPECT_EQ(SelectClips(layout, "cam", params),
                  BruteForceClips(layout, "cam", frames, h, 2, 3.0))
            << "trial " << trial;
      }
    }
  }
}

}  // namespace
}  // namespace gsedit
