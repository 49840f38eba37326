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

#include <random>

#include <benchmark/benchmark.h>

#include "gsedit/editing.h"
#include "gsedit/evalkit.h"
#include "gsedit/gaussians.h"
#include "gsedit/layout.h"
#include "synthetic.h"

namespace gsedit {
namespace {

// Camera at height 1.6 looking along world +x.
CameraFrame FrontCamera(int width, int height) {
  CameraFrame cam;
  cam.intrinsics = {0.8 * width, 0.8 * width, width / 2.0, height / 2.0, width, height};
  cam.cam_to_world.rotation << 0, 0, 1, -1, 0, 0, 0, -1, 0;
  cam.cam_to_world.translation = Vec3(0, 0, 1.6);
  cam.camera_id = "front";
  return cam;
}

Box3D CarBox(const Vec3& center, double yaw) {
  Box3D b;
  b.center = center;
  b.dims = Vec3(4.5, 1.9, 1.5);
  b.yaw = yaw;
  return b;
}

GaussianCloud PlacedCar() {
  return *PlaceAsset(tools::ProceduralCar(7), CarBox(Vec3(10, 0.5, 0.75), 0.4));
}

void BM_RenderTiled(benchmark::State& state) {
  const GaussianCloud car = PlacedCar();
  const CameraFrame cam = FrontCamera(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)) * 2 / 3);
  RasterConfig config;
  config.num_threads = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(Render(car, cam, config));
}
BENCHMARK(BM_RenderTiled)->Args({480, 1})->Args({960, 1})->Args({960, 4})->Unit(benchmark::kMillisecond);

void BM_RenderNaive(benchmark::State& state) {
  const GaussianCloud car = PlacedCar();
  const CameraFrame cam = FrontCamera(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)) * 2 / 3);
  for (auto _ : state) benchmark::DoNotOptimize(RenderNaive(car, cam));
}
BENCHMARK(BM_RenderNaive)->Arg(240)->Arg(480)->Unit(benchmark::kMillisecond);

void BM_DepthBoxes(benchmark::State& state) {
  SceneLayout layout;
  layout.num_frames = 1;
  layout.cameras[{0, "front"}] = FrontCamera(960, 640);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < state.range(0); ++i) {
    ObjectTrack t;
    t.object_id = "car_" + std::to_string(i);
    t.boxes[0] = CarBox(Vec3(6 + 40 * u(rng), 16 * u(rng) - 8, 0.75), 6.28 * u(rng));
    layout.tracks.push_back(t);
  }
  for (auto _ : state) benchmark::DoNotOptimize(RenderDepthBoxes(layout, 0, "front"));
}
BENCHMARK(BM_DepthBoxes)->Arg(1)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Iou3d(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<std::pair<Box3D, Box3D>> pairs;
  for (int i = 0; i < 256; ++i) {
    pairs.emplace_back(CarBox(Vec3(u(rng), u(rng), 0), 6.28 * u(rng)),
                       CarBox(Vec3(u(rng), u(rng), 0), 6.28 * u(rng)));
  }
  size_t k = 0;
  for (auto _ : state) {
    const auto& [a, b] = pairs[k++ % pairs.size()];
    benchmark::DoNotOptimize(Iou3d(a, b));
  }
}
BENCHMARK(BM_Iou3d);

}  // namespace
}  // namespace gsedit

BENCHMARK_MAIN();
