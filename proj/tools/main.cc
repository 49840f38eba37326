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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.h"
#include "gsedit/ply.h"

namespace {

using gsedit::tools::CommonOptions;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gsedit: Gaussian-guided object editing for driving scenes"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string ply_convention = "auto";
  app.add_flag("--strict", common.strict, "Reject unknown fields in input files");
  app.add_option("--ply_convention", ply_convention,
                 "Asset value convention: auto, linear or splat");
  app.add_option("--threads", common.threads,
                 "Worker threads (default: GSEDIT_THREADS or the core count)");

  gsedit::tools::RenderOptions render;
  CLI::App* render_cmd = app.add_subcommand("render", "Render V_g, depth boxes and edges for one frame");
  render_cmd->add_option("--scene", render.scene)->required();
  render_cmd->add_option("--asset", render.asset)->required();
  render_cmd->add_option("--object", render.object_id);
  render_cmd->add_option("--frame", render.frame)->required();
  render_cmd->add_option("--camera", render.camera_id)->required();
  render_cmd->add_option("--out", render.out_dir)->required();
  render_cmd->add_flag("--naive", render.naive, "Use the per-pixel reference rasterizer");

  gsedit::tools::EditOptions edit;
  CLI::App* edit_cmd = app.add_subcommand("edit", "Build conditioning bundles for edits");
  edit_cmd->add_option("--scene", edit.scene)->required();
  edit_cmd->add_option("--edits", edit.edits)->required();
  edit_cmd->add_option("--assets", edit.assets_dir)->required();
  edit_cmd->add_option("--camera", edit.camera_id);
  edit_cmd->add_option("--clip", edit.clip_start, "First frame of the clip");
  edit_cmd->add_option("--n", edit.clip_frames, "Clip length")->capture_default_str();
  edit_cmd->add_option("--seed", edit.seed);
  edit_cmd->add_flag("--augment", edit.augment, "Augment reference images");
  edit_cmd->add_option("--out_dir", edit.out_dir)->required();

  gsedit::tools::PrepOptions prep;
  CLI::App* prep_cmd = app.add_subcommand("prep", "Select training clips");
  prep_cmd->add_option("--scene", prep.scene)->required();
  prep_cmd->add_option("--camera", prep.camera_id);
  prep_cmd->add_option("--n", prep.num_frames)->capture_default_str();
  prep_cmd->add_option("--min_height", prep.min_height_px)->capture_default_str();
  prep_cmd->add_option("--max_neighbors", prep.max_neighbors)->capture_default_str();
  prep_cmd->add_option("--radius", prep.neighbor_radius_m)->capture_default_str();
  prep_cmd->add_option("--pad_frac", prep.pad_frac)->capture_default_str();
  prep_cmd->add_option("--min_pad", prep.min_pad_px)->capture_default_str();
  prep_cmd->add_option("--random_mask_ratio", prep.random_mask_ratio)->capture_default_str();
  prep_cmd->add_option("--seed", prep.seed);
  prep_cmd->add_option("--out", prep.out)->required();

  gsedit::tools::EvalOptions eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "LET metrics on edited instances");
  eval_cmd->add_option("--scene", eval.scene)->required();
  eval_cmd->add_option("--edits", eval.edits)->required();
  eval_cmd->add_option("--detections", eval.detections)->required();
  eval_cmd->add_option("--tol", eval.lon_tolerance_frac)->capture_default_str();
  eval_cmd->add_option("--iou", eval.iou_threshold)->capture_default_str();
  eval_cmd->add_flag("--all_objects", eval.all_objects, "Score every object, not just edited ones");
  eval_cmd->add_option("--out", eval.out)->required();

  gsedit::tools::CropOptions crop;
  CLI::App* crop_cmd = app.add_subcommand("crop", "Export the square evaluation crop of an object");
  crop_cmd->add_option("--scene", crop.scene)->required();
  crop_cmd->add_option("--image", crop.image)->required();
  crop_cmd->add_option("--object", crop.object_id)->required();
  crop_cmd->add_option("--frame", crop.frame)->required();
  crop_cmd->add_option("--camera", crop.camera_id)->required();
  crop_cmd->add_option("--size", crop.size)->capture_default_str();
  crop_cmd->add_option("--out", crop.out)->required();

  gsedit::tools::DemoOptions demo;
  CLI::App* demo_cmd = app.add_subcommand("demo", "Synthetic end-to-end run");
  demo_cmd->add_option("--out_dir", demo.out_dir)->required();
  demo_cmd->add_option("--seed", demo.seed)->capture_default_str();
  demo_cmd->add_flag("--generate_only", demo.generate_only);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return gsedit::tools::kExitParse;
  }
  auto convention = gsedit::ParsePlyConvention(ply_convention);
  if (!convention.ok()) {
    std::cerr << "error: " << convention.status().message() << "\n";
    return gsedit::tools::kExitParse;
  }
  common.ply_convention = *convention;

  if (render_cmd->parsed()) return gsedit::tools::RunRender(render, common, std::cerr);
  if (edit_cmd->parsed()) return gsedit::tools::RunEdit(edit, common, std::cerr);
  if (prep_cmd->parsed()) return gsedit::tools::RunPrep(prep, common, std::cerr);
  if (eval_cmd->parsed()) return gsedit::tools::RunEval(eval, common, std::cerr);
  if (crop_cmd->parsed()) return gsedit::tools::RunCrop(crop, common, std::cerr);
  return gsedit::tools::RunDemo(demo, common, std::cout, std::cerr);
}
