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

#include "commands.h"

#include <chrono>
#include <filesystem>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "gsedit/bundle_io.h"
#include "gsedit/dataprep.h"
#include "gsedit/editing.h"
#include "gsedit/evalkit.h"
#include "gsedit/gaussians.h"
#include "gsedit/image_io.h"
#include "gsedit/layout.h"
#include "gsedit/parallel.h"
#include "gsedit/scene_io.h"
#include "gsedit/status.h"
#include "pipeline.h"
#include "synthetic.h"

namespace gsedit::tools {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// An error status tagged with the exit code it maps to.
struct Failure {
  int exit_code;
  absl::Status status;
};

int Report(const Failure& f, std::ostream& err) {
  err << "error: " << f.status.message() << "\n";
  return f.exit_code;
}

std::string SceneDir(const std::string& scene_path) {
  return fs::path(scene_path).parent_path().string();
}

absl::StatusOr<SceneLayout> LoadScene(const std::string& path,
                                      const CommonOptions& common,
                                      std::ostream& err) {
  GSEDIT_ASSIGN_OR_RETURN(const std::string text, ReadFile(path));
  std::vector<std::string> warnings;
  auto layout = ParseScene(text, {common.strict, &warnings});
  for (const std::string& w : warnings) err << "warning: " << path << ": " << w << "\n";
  if (!layout.ok()) {
    return MakeError(ErrorCodeOf(layout.status()).value_or(ErrorCode::kParseError),
                     absl::StrCat(path, ": ", layout.status().message()));
  }
  return layout;
}

absl::StatusOr<std::vector<EditCommand>> LoadEdits(const std::string& path,
                                                   const CommonOptions& common,
                                                   std::ostream& err) {
  GSEDIT_ASSIGN_OR_RETURN(const std::string text, ReadFile(path));
  std::vector<std::string> warnings;
  auto edits = ParseEdits(text, {common.strict, &warnings});
  for (const std::string& w : warnings) err << "warning: " << path << ": " << w << "\n";
  if (!edits.ok()) {
    return MakeError(ErrorCode::kParseError,
                     absl::StrCat(path, ": ", edits.status().message()));
  }
  return edits;
}

absl::StatusOr<GaussianCloud> LoadAssetAt(const std::string& path,
                                          const CommonOptions& common) {
  auto cloud = LoadAssetFile(path, common.ply_convention);
  if (!cloud.ok()) {
    return MakeError(ErrorCodeOf(cloud.status()).value_or(ErrorCode::kParseError),
                     absl::StrCat(path, ": ", cloud.status().message()));
  }
  return cloud;
}

absl::StatusOr<RgbImage> LoadRgbPng(const std::string& path) {
  GSEDIT_ASSIGN_OR_RETURN(const std::string bytes, ReadFile(path));
  auto img = DecodePng(bytes);
  if (!img.ok()) {
    return MakeError(ErrorCode::kParseError,
                     absl::StrCat(path, ": ", img.status().message()));
  }
  if (img->channels() != 3) {
    return MakeError(ErrorCode::kParseError, absl::StrCat(path, ": expected an RGB PNG"));
  }
  return Dequantize(*img);
}

absl::Status WritePng(const std::string& path, const Image<uint8_t>& img) {
  GSEDIT_ASSIGN_OR_RETURN(const std::string bytes, EncodePng(img));
  return WriteFileAtomic(path, bytes);
}

absl::Status MakeDirs(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    return MakeError(ErrorCode::kIoError,
                     absl::StrCat("cannot create ", dir, ": ", ec.message()));
  }
  return absl::OkStatus();
}

int Threads(const CommonOptions& common) {
  return common.threads > 0 ? common.threads : WorkerCountFromEnv();
}

std::string Join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

// Source frames come from the scene's image paths when present, otherwise
// from the procedural backdrop.
FrameSource MakeFrameSource(const SceneLayout& layout, const std::string& scene_dir) {
  return [&layout, scene_dir](const CameraFrame& cam) -> absl::StatusOr<RgbImage> {
    auto it = layout.source_images.find(CameraKey(cam.frame_index, cam.camera_id));
    if (it == layout.source_images.end()) return ProceduralBackground(cam);
    return LoadRgbPng(Join(scene_dir, it->second));
  };
}

std::string Dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

int RunRender(const RenderOptions& options, const CommonOptions& common,
              std::ostream& err) {
  auto layout = LoadScene(options.scene, common, err);
  if (!layout.ok()) return Report({kExitParse, layout.status()}, err);
  auto asset = LoadAssetAt(options.asset, common);
  if (!asset.ok()) return Report({kExitParse, asset.status()}, err);

  auto render = [&]() -> absl::Status {
    GSEDIT_ASSIGN_OR_RETURN(const CameraFrame* cam,
                            layout->Camera(options.frame, options.camera_id));
    const Box3D* box = nullptr;
    if (!options.object_id.empty()) {
      const ObjectTrack* track = layout->FindTrack(options.object_id);
      if (track == nullptr) {
        return MakeError(ErrorCode::kUnknownObject,
                         absl::StrCat("no object '", options.object_id, "'"));
      }
      box = track->BoxAt(options.frame);
      if (box == nullptr) {
        return MakeError(ErrorCode::kObjectAbsent,
                         absl::StrCat("object '", options.object_id,
                                      "' absent at frame ", options.frame));
      }
    } else {
      int present = 0;
      for (const ObjectTrack& t : layout->tracks) {
        if (const Box3D* b = t.BoxAt(options.frame)) {
          box = b;
          ++present;
        }
      }
      if (present != 1) {
        return MakeError(ErrorCode::kInvalidArgument,
                         absl::StrCat(present, " objects in frame ", options.frame,
                                      "; choose one with --object"));
      }
    }
    GSEDIT_ASSIGN_OR_RETURN(const GaussianCloud placed, PlaceAsset(*asset, *box));
    RasterConfig config;
    config.num_threads = Threads(common);
    const RenderedFrame frame =
        options.naive ? RenderNaive(placed, *cam, config) : Render(placed, *cam, config);
    GSEDIT_ASSIGN_OR_RETURN(const ScalarImage depth,
                            RenderDepthBoxes(*layout, options.frame, options.camera_id));
    GSEDIT_ASSIGN_OR_RETURN(const Mask edges,
                            RenderEdgeMask(*layout, options.frame, options.camera_id));
    GSEDIT_RETURN_IF_ERROR(MakeDirs(options.out_dir));
    GSEDIT_RETURN_IF_ERROR(WritePng(Join(options.out_dir, "vg.png"),
                                    Quantize(CompositeOverWhite(frame))));
    GSEDIT_RETURN_IF_ERROR(
        WriteFileAtomic(Join(options.out_dir, "depth.pfm"), EncodePfm(depth)));
    GSEDIT_ASSIGN_OR_RETURN(const std::string edge_png, EncodeMaskPng(edges));
    return WriteFileAtomic(Join(options.out_dir, "edge.png"), edge_png);
  };
  if (absl::Status s = render(); !s.ok()) return Report({kExitRender, s}, err);
  return kExitOk;
}

int RunEdit(const EditOptions& options, const CommonOptions& common,
            std::ostream& err) {
  auto layout = LoadScene(options.scene, common, err);
  if (!layout.ok()) return Report({kExitParse, layout.status()}, err);
  auto edits = LoadEdits(options.edits, common, err);
  if (!edits.ok()) return Report({kExitParse, edits.status()}, err);

  AssetStore assets;
  for (const EditCommand& cmd : *edits) {
    const std::string ref = AssetRefOf(cmd);
    if (ref.empty() || assets.clouds.contains(ref)) continue;
    const std::string ply = Join(options.assets_dir, ref + ".ply");
    if (!fs::exists(ply)) continue;  // reported as MissingAsset by the edit
    auto cloud = LoadAssetAt(ply, common);
    if (!cloud.ok()) return Report({kExitParse, cloud.status()}, err);
    assets.clouds[ref] = *std::move(cloud);
    const std::string png = Join(options.assets_dir, ref + ".png");
    if (fs::exists(png)) {
      auto ref_img = LoadRgbPng(png);
      if (!ref_img.ok()) return Report({kExitParse, ref_img.status()}, err);
      assets.references[ref] = *std::move(ref_img);
    }
  }

  std::string camera_id = options.camera_id;
  if (camera_id.empty()) {
    const std::vector<std::string> ids = layout->CameraIds();
    if (ids.empty()) {
      return Report({kExitRender, MakeError(ErrorCode::kMissingCamera,
                                            "scene has no cameras")},
                    err);
    }
    camera_id = ids.front();
  }
  const FrameSource frames = MakeFrameSource(*layout, SceneDir(options.scene));
  const ClipSpec clip{camera_id, options.clip_start, options.clip_frames};
  const int threads = Threads(common);

  int failures = 0;
  for (size_t k = 0; k < edits->size(); ++k) {
    const EditCommand& cmd = (*edits)[k];
    BundleOptions bundle_options;
    bundle_options.num_threads = threads;
    bundle_options.seed = DeriveSeed(options.seed, k);
    if (options.augment) bundle_options.augment = AugmentParams{};
    const std::string dir = Join(
        options.out_dir,
        absl::StrFormat("edit_%d_%s_%s", k, std::string(EditKind(cmd)), EditedObjectId(cmd)));
    absl::Status s = [&]() -> absl::Status {
      GSEDIT_ASSIGN_OR_RETURN(const ConditioningBundle bundle,
                              BuildBundle(*layout, cmd, clip, assets, frames, bundle_options));
      GSEDIT_ASSIGN_OR_RETURN(const ChannelStack stack, AssembleChannelStack(bundle));
      return WriteBundle(dir, bundle, stack);
    }();
    if (!s.ok()) {
      ++failures;
      err << "error: edit " << k << " (" << EditKind(cmd) << " " << EditedObjectId(cmd)
          << "): " << s.message() << "\n";
    }
  }
  return failures == 0 ? kExitOk : kExitRender;
}

int RunPrep(const PrepOptions& options, const CommonOptions& common,
            std::ostream& err) {
  auto layout = LoadScene(options.scene, common, err);
  if (!layout.ok()) return Report({kExitParse, layout.status()}, err);
  if (options.random_mask_ratio < 0.0 || options.random_mask_ratio > 1.0) {
    return Report({kExitParse, MakeError(ErrorCode::kInvalidArgument,
                                         "random mask ratio must lie in [0, 1]")},
                  err);
  }
  std::string camera_id = options.camera_id;
  if (camera_id.empty()) {
    const std::vector<std::string> ids = layout->CameraIds();
    if (!ids.empty()) camera_id = ids.front();
  }
  ClipSelectionParams params;
  params.num_frames = options.num_frames;
  params.min_height_px = options.min_height_px;
  params.max_neighbors = options.max_neighbors;
  params.neighbor_radius_m = options.neighbor_radius_m;
  const std::vector<ClipWindow> windows = SelectClips(*layout, camera_id, params);

  json clips = json::array();
  for (size_t i = 0; i < windows.size(); ++i) {
    const ClipWindow& w = windows[i];
    std::vector<int> frames(static_cast<size_t>(params.num_frames));
    for (int j = 0; j < params.num_frames; ++j) frames[j] = w.start_frame + j;
    Rng rng(DeriveSeed(options.seed, i));
    json random_masks = json::array();
    for (int f : frames) {
      if (!rng.Bernoulli(options.random_mask_ratio)) continue;
      auto rect = RandomObjectFreeRect(*layout, f, camera_id, rng);
      if (!rect.ok()) continue;
      random_masks.push_back(
          {{"frame", f}, {"rect", json::array({rect->x0, rect->y0, rect->x1, rect->y1})}});
    }
    clips.push_back({{"object_id", w.object_id},
                     {"start_frame", w.start_frame},
                     {"num_frames", params.num_frames},
                     {"edited_frame", w.start_frame},
                     {"reference_frame", PickReferenceFrame(frames, w.start_frame)},
                     {"random_masks", std::move(random_masks)}});
  }
  json manifest = {
      {"camera_id", camera_id},
      {"selection",
       {{"num_frames", params.num_frames},
        {"min_height_px", params.min_height_px},
        {"max_neighbors", params.max_neighbors},
        {"neighbor_radius_m", params.neighbor_radius_m}}},
      {"mask_padding", {{"pad_frac", options.pad_frac}, {"min_pad_px", options.min_pad_px}}},
      {"random_mask_ratio", options.random_mask_ratio},
      {"seed", options.seed},
      {"clips", std::move(clips)}};
  const fs::path parent = fs::path(options.out).parent_path();
  if (!parent.empty()) {
    if (absl::Status s = MakeDirs(parent.string()); !s.ok()) {
      return Report({kExitRender, s}, err);
    }
  }
  if (absl::Status s = WriteFileAtomic(options.out, Dump(manifest)); !s.ok()) {
    return Report({kExitRender, s}, err);
  }
  return kExitOk;
}

int RunEval(const EvalOptions& options, const CommonOptions& common,
            std::ostream& err) {
  auto layout = LoadScene(options.scene, common, err);
  if (!layout.ok()) return Report({kExitParse, layout.status()}, err);
  auto edits = LoadEdits(options.edits, common, err);
  if (!edits.ok()) return Report({kExitParse, edits.status()}, err);
  auto det_text = ReadFile(options.detections);
  if (!det_text.ok()) return Report({kExitParse, det_text.status()}, err);
  std::vector<std::string> warnings;
  auto detections = ParseDetections(*det_text, {common.strict, &warnings});
  for (const std::string& w : warnings) err << "warning: " << w << "\n";
  if (!detections.ok()) {
    return Report({kExitParse, MakeError(ErrorCode::kParseError,
                                         absl::StrCat(options.detections, ": ",
                                                      detections.status().message()))},
                  err);
  }
  EvalConfig config;
  config.lon_tolerance_frac = options.lon_tolerance_frac;
  config.iou_threshold = options.iou_threshold;
  config.restrict_to_edited = !options.all_objects;
  if (absl::Status s = config.Validate(); !s.ok()) return Report({kExitParse, s}, err);

  auto edited = ApplyEdits(*layout, *edits);
  if (!edited.ok()) return Report({kExitParse, edited.status()}, err);
  std::optional<std::vector<std::string>> ids;
  if (config.restrict_to_edited) ids = EditedInstanceIds(*edits);
  auto clips = MatchDetections(*edited, ids, *detections, config);
  if (!clips.ok()) return Report({kExitParse, clips.status()}, err);
  auto report = ComputeMetrics(*clips);
  if (!report.ok()) return Report({kExitEval, report.status()}, err);
  if (absl::Status s = WriteFileAtomic(options.out, SerializeMetricsReport(*report, config));
      !s.ok()) {
    return Report({kExitEval, s}, err);
  }
  return kExitOk;
}

int RunCrop(const CropOptions& options, const CommonOptions& common,
            std::ostream& err) {
  auto layout = LoadScene(options.scene, common, err);
  if (!layout.ok()) return Report({kExitParse, layout.status()}, err);
  auto image = LoadRgbPng(options.image);
  if (!image.ok()) return Report({kExitParse, image.status()}, err);
  absl::Status s = [&]() -> absl::Status {
    GSEDIT_ASSIGN_OR_RETURN(const CameraFrame* cam,
                            layout->Camera(options.frame, options.camera_id));
    const ObjectTrack* track = layout->FindTrack(options.object_id);
    if (track == nullptr) {
      return MakeError(ErrorCode::kUnknownObject,
                       absl::StrCat("no object '", options.object_id, "'"));
    }
    const Box3D* box = track->BoxAt(options.frame);
    if (box == nullptr) {
      return MakeError(ErrorCode::kObjectAbsent,
                       absl::StrCat("object '", options.object_id, "' absent at frame ",
                                    options.frame));
    }
    GSEDIT_ASSIGN_OR_RETURN(const RgbImage crop,
                            CropEvalRegion(*image, *box, *cam, options.size));
    return WritePng(options.out, Quantize(crop));
  }();
  if (!s.ok()) return Report({kExitRender, s}, err);
  return kExitOk;
}

int RunDemo(const DemoOptions& options, const CommonOptions& common,
            std::ostream& out, std::ostream& err) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  auto seconds = [&] {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  };
  const std::string& dir = options.out_dir;
  absl::Status s = [&]() -> absl::Status {
    const DemoScene demo = MakeDemoScene(options.seed);
    GSEDIT_RETURN_IF_ERROR(MakeDirs(Join(dir, "frames")));
    GSEDIT_RETURN_IF_ERROR(MakeDirs(Join(dir, "assets")));
    GSEDIT_RETURN_IF_ERROR(WriteFileAtomic(Join(dir, "scene.json"), SerializeScene(demo.layout)));
    for (const auto& [key, frame] : demo.frames) {
      GSEDIT_RETURN_IF_ERROR(
          WritePng(Join(dir, demo.layout.source_images.at(key)), Quantize(frame)));
    }
    GSEDIT_RETURN_IF_ERROR(
        WriteFileAtomic(Join(dir, absl::StrCat("assets/", kDemoAsset, ".ply")),
                        EncodeAsset(demo.car, PlyConvention::kLinear)));
    GSEDIT_RETURN_IF_ERROR(WriteFileAtomic(Join(dir, "edits.json"), SerializeEdits(demo.edits)));
    GSEDIT_ASSIGN_OR_RETURN(const SceneLayout edited, ApplyEdits(demo.layout, demo.edits));
    const std::vector<Detection> dets =
        ExactDetections(edited, EditedInstanceIds(demo.edits));
    return WriteFileAtomic(Join(dir, "detections.jsonl"), SerializeDetections(dets));
  }();
  if (!s.ok()) return Report({kExitRender, s}, err);
  out << absl::StrFormat("generated synthetic scene in %s (%.2f s)\n", dir, seconds());
  if (options.generate_only) return kExitOk;

  PrepOptions prep;
  prep.scene = Join(dir, "scene.json");
  prep.camera_id = kDemoCamera;
  prep.seed = options.seed;
  prep.out = Join(dir, "manifest.json");
  if (int code = RunPrep(prep, common, err); code != kExitOk) return code;
  out << absl::StrFormat("prep: manifest.json (%.2f s)\n", seconds());

  EditOptions edit;
  edit.scene = prep.scene;
  edit.edits = Join(dir, "edits.json");
  edit.assets_dir = Join(dir, "assets");
  edit.camera_id = kDemoCamera;
  edit.seed = options.seed;
  edit.out_dir = Join(dir, "bundles");
  if (int code = RunEdit(edit, common, err); code != kExitOk) return code;
  out << absl::StrFormat("edit: bundles/ (%.2f s)\n", seconds());

  EvalOptions eval;
  eval.scene = prep.scene;
  eval.edits = edit.edits;
  eval.detections = Join(dir, "detections.jsonl");
  eval.out = Join(dir, "metrics.json");
  if (int code = RunEval(eval, common, err); code != kExitOk) return code;
  auto metrics = ReadFile(eval.out);
  if (!metrics.ok()) return Report({kExitEval, metrics.status()}, err);
  const json report = json::parse(*metrics);
  out << absl::StrFormat("eval: LET-mAP %.4f  LET-mAPH %.4f  LET-mAPL %.4f (%.2f s)\n",
                         report["let_map"].get<double>(), report["let_maph"].get<double>(),
                         report["let_mapl"].get<double>(), seconds());
  return kExitOk;
}

}  // namespace gsedit::tools
