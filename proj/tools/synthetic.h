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

// Procedural content: a Gaussian car asset, a ground/sky backdrop, and the
// small desk scene used by the demo and the end-to-end tests.

#ifndef GSEDIT_TOOLS_SYNTHETIC_H_
#define GSEDIT_TOOLS_SYNTHETIC_H_

#include <cstdint>
#include <map>
#include <vector>

#include "gsedit/editing.h"
#include "gsedit/evalkit.h"
#include "gsedit/gaussians.h"
#include "gsedit/layout.h"

namespace gsedit::tools {

// About 2000 Gaussians in the asset frame: +x forward, z up, origin at the
// geometric center. Body, cabin with dark windows, four wheels.
GaussianCloud ProceduralCar(uint64_t seed);

// Sky gradient above the horizon, checkered ground plane z = 0 below.
RgbImage ProceduralBackground(const CameraFrame& cam);

// Backdrop plus every object in the frame rendered with `asset`.
RgbImage CompositeSourceFrame(const SceneLayout& layout, const CameraFrame& cam,
                              const GaussianCloud& asset);

struct DemoScene {
  SceneLayout layout;
  std::vector<EditCommand> edits;
  GaussianCloud car;
  std::map<CameraKey, RgbImage> frames;
};

inline constexpr char kDemoCamera[] = "front";
inline constexpr char kDemoAsset[] = "car";

// 960x640 camera driving along +x for 10 frames past three parked cars.
// Edits: rotate car_0 by -5 degrees, move car_1 one meter left, insert
// car_3, delete car_2. Source frames are filled in and referenced from the
// layout as frames/<camera>_<frame>.png.
DemoScene MakeDemoScene(uint64_t seed);

// Score-1 detections equal to the edited instances' boxes in every frame
// of every camera.
std::vector<Detection> ExactDetections(const SceneLayout& edited,
                                       const std::vector<std::string>& ids);

}  // namespace gsedit::tools

#endif  // GSEDIT_TOOLS_SYNTHETIC_H_
