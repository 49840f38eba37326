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

// Subcommands of the gsedit tool. Each returns the process exit code and
// reports problems on `err`:
//   0  success
//   2  an input file failed to parse
//   3  rendering or bundle assembly failed
//   4  evaluation is degenerate (no ground truth)

#ifndef GSEDIT_TOOLS_COMMANDS_H_
#define GSEDIT_TOOLS_COMMANDS_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "gsedit/ply.h"

namespace gsedit::tools {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitRender = 3;
inline constexpr int kExitEval = 4;

struct CommonOptions {
  bool strict = false;
  // Overrides the convention detected from asset files.
  PlyConvention ply_convention = PlyConvention::kAuto;
  // Worker count; 0 reads GSEDIT_THREADS.
  int threads = 0;
};

struct RenderOptions {
  std::string scene;
  std::string asset;
  // Object whose box places the asset; may be empty when exactly one object
  // is present in the frame.
  std::string object_id;
  int frame = 0;
  std::string camera_id;
  std::string out_dir;
  // Renders with the per-pixel reference rasterizer.
  bool naive = false;
};
// Writes vg.png (asset over white), depth.pfm and edge.png.
int RunRender(const RenderOptions& options, const CommonOptions& common,
              std::ostream& err);

struct EditOptions {
  std::string scene;
  std::string edits;
  std::string assets_dir;
  std::string camera_id;  // empty: the scene's first camera
  int clip_start = 0;
  int clip_frames = 10;
  uint64_t seed = 0;
  bool augment = false;
  std::string out_dir;
};
// One bundle directory per edit, named edit_<k>_<kind>_<object id>.
int RunEdit(const EditOptions& options, const CommonOptions& common,
            std::ostream& err);

struct PrepOptions {
  std::string scene;
  std::string camera_id;
  int num_frames = 10;
  double min_height_px = 40.0;
  int max_neighbors = 2;
  double neighbor_radius_m = 3.0;
  double pad_frac = 0.1;
  double min_pad_px = 8.0;
  double random_mask_ratio = 0.2;
  uint64_t seed = 0;
  std::string out;
};
int RunPrep(const PrepOptions& options, const CommonOptions& common,
            std::ostream& err);

struct EvalOptions {
  std::string scene;
  std::string edits;
  std::string detections;
  double lon_tolerance_frac = 0.05;
  double iou_threshold = 0.5;
  // Score every object of the edited layout instead of the edited ones.
  bool all_objects = false;
  std::string out;
};
int RunEval(const EvalOptions& options, const CommonOptions& common,
            std::ostream& err);

struct CropOptions {
  std::string scene;
  std::string image;
  std::string object_id;
  int frame = 0;
  std::string camera_id;
  int size = 512;
  std::string out;
};
int RunCrop(const CropOptions& options, const CommonOptions& common,
            std::ostream& err);

struct DemoOptions {
  std::string out_dir;
  uint64_t seed = 7;
  // Stops after writing the synthetic inputs.
  bool generate_only = false;
};
// Generates the synthetic desk scene, then runs prep, edit and eval on it.
int RunDemo(const DemoOptions& options, const CommonOptions& common,
            std::ostream& out, std::ostream& err);

}  // namespace gsedit::tools

#endif  // GSEDIT_TOOLS_COMMANDS_H_
