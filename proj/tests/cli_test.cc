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

// End-to-end checks of the gsedit binary: exit codes, messages, golden
// outputs and byte-level determinism.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "gsedit/image_io.h"
#include "gsedit/ply.h"
#include "gsedit/scene_io.h"
#include "oracles.h"
#include "scenes.h"
#include "synthetic.h"

namespace gsedit {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using oracle::MakeBox;
using oracle::StaticTrack;

struct RunResult {
  int exit_code = -1;
  std::string err;
};

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::path(::testing::TempDir()) / (std::string("gsedit_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_ / "assets");
  }

  RunResult Run(const std::string& args, const std::string& env = "") {
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = "cd '" + dir_.string() + "' && " + env + " '" + GSEDIT_CLI_PATH +
                            "' " + args + " > stdout.txt 2> '" + err.string() + "'";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.err = Slurp(err);
    return r;
  }

  // 10 frames of a camera driving past two cars; a car asset.
  void WriteSmallScene(int width = 160, int height = 128) {
    SceneLayout layout;
    layout.num_frames = 10;
    for (int f = 0; f < 10; ++f) {
      layout.cameras[{f, "front"}] =
          oracle::ForwardCamera(Vec3(0.4 * f, 0, 1.6), f, "front", width, height, 140.0);
    }
    layout.tracks.push_back(StaticTrack("car_0", MakeBox(Vec3(14, -1, 0.75), Vec3(4.5, 1.9, 1.5), 0.1), 0, 9));
    layout.tracks.push_back(StaticTrack("car_1", MakeBox(Vec3(20, 4, 0.75), Vec3(4.2, 1.8, 1.5), -0.2), 0, 9));
    Spit(dir_ / "scene.json", SerializeScene(layout));
    Spit(dir_ / "assets" / "car.ply",
         EncodeAsset(tools::ProceduralCar(1), PlyConvention::kLinear));
    Spit(dir_ / "edits.json", R"({"edits": [
      {"type": "reposition", "object_id": "car_0", "delta_yaw_deg": -5, "asset": "car"},
      {"type": "reposition", "object_id": "car_1", "delta_yaw_deg": 0, "delta_t_local": [0, 1, 0], "asset": "car"}]})");
    layout_ = layout;
  }

  // Detections equal to the edited boxes with car_0 shifted along the line
  // of sight by `frac` of its range.
  void WriteDetections(double frac) {
    std::vector<EditCommand> edits = {Reposition{"car_0", -5.0 * M_PI / 180.0, Vec3::Zero(), "car"},
                                      Reposition{"car_1", 0.0, Vec3(0, 1, 0), "car"}};
    SceneLayout edited = layout_;
    for (const auto& e : edits) edited = *ApplyEdit(edited, e);
    std::vector<Detection> dets;
    for (int f = 0; f < 10; ++f) {
      const Vec3 eye = layout_.cameras.at({f, "front"}).cam_to_world.translation;
      for (const ObjectTrack& t : edited.tracks) {
        Detection d;
        d.box = t.boxes.at(f);
        if (t.object_id == "car_0") d.box.center += frac * (d.box.center - eye);
        d.frame_index = f;
        d.camera_id = "front";
        d.object_id = t.object_id;
        dets.push_back(d);
      }
    }
    Spit(dir_ / "dets.jsonl", SerializeDetections(dets));
  }

  std::map<std::string, std::string> TreeBytes(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
      if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = Slurp(e.path());
    }
    return out;
  }

  fs::path dir_;
  SceneLayout layout_;
};

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(Run("").exit_code, 2);
  EXPECT_EQ(Run("render --no_such_flag").exit_code, 2);
  EXPECT_EQ(Run("eval --scene x.json --edits e.json --detections d.jsonl --tol abc").exit_code, 2);
}

TEST_F(CliTest, MalformedSceneExitsTwo) {
  WriteSmallScene();
  Spit(dir_ / "bad.json", "{\"version\": 1, ");
  const RunResult r = Run("prep --scene bad.json --camera front --out m.json");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("bad.json"), std::string::npos) << r.err;
  Spit(dir_ / "bad.ply", "ply\nformat ascii 1.0\nend_header\n");
  EXPECT_EQ(Run("render --scene scene.json --asset bad.ply --object car_0 --camera front --out r")
                .exit_code,
            2);
}

TEST_F(CliTest, StrictRejectsUnknownFields) {
  WriteSmallScene();
  std::string text = Slurp(dir_ / "scene.json");
  text.insert(1, "\"comment\": \"hi\",");
  Spit(dir_ / "extra.json", text);
  const RunResult lenient = Run("prep --scene extra.json --camera front --out m.json");
  EXPECT_EQ(lenient.exit_code, 0);
  EXPECT_NE(lenient.err.find("warning"), std::string::npos);
  EXPECT_EQ(Run("--strict prep --scene extra.json --camera front --out m.json").exit_code, 2);
}

TEST_F(CliTest, MissingCameraNamesTheCamera) {
  WriteSmallScene();
  const RunResult r =
      Run("render --scene scene.json --asset assets/car.ply --object car_0 --frame 0 --camera side_left --out r");
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_NE(r.err.find("side_left"), std::string::npos) << r.err;
  const RunResult e = Run("edit --scene scene.json --edits edits.json --assets assets --camera side_left --out_dir b");
  EXPECT_EQ(e.exit_code, 3);
  EXPECT_NE(e.err.find("side_left"), std::string::npos) << e.err;
}

TEST_F(CliTest, RenderMatchesGolden) {
  const std::string golden = GSEDIT_GOLDEN_DIR;
  for (const std::string& mode : {"", " --naive"}) {
    fs::remove_all(dir_ / "out");
    const RunResult r = Run("--threads 3 render --scene '" + golden + "/scene.json' --asset '" + golden +
                            "/car.ply' --object car_0 --frame 0 --camera front --out out" + mode);
    ASSERT_EQ(r.exit_code, 0) << r.err;
    for (const char* name : {"vg.png", "depth.pfm", "edge.png"}) {
      EXPECT_EQ(Slurp(dir_ / "out" / name), Slurp(fs::path(golden) / "expected" / name))
          << name << mode;
    }
  }
}

TEST_F(CliTest, EditIsByteIdenticalAcrossRunsAndThreads) {
  WriteSmallScene();
  const std::string args = "edit --scene scene.json --edits edits.json --assets assets --camera front --seed 5 --augment --out_dir ";
  ASSERT_EQ(Run(args + "run_a", "GSEDIT_THREADS=1").exit_code, 0);
  ASSERT_EQ(Run(args + "run_b", "GSEDIT_THREADS=1").exit_code, 0);
  ASSERT_EQ(Run(args + "run_c", "GSEDIT_THREADS=8").exit_code, 0);
  const auto a = TreeBytes(dir_ / "run_a");
  EXPECT_TRUE(a.contains("edit_0_reposition_car_0/stack.gst"));
  EXPECT_TRUE(a.contains("edit_1_reposition_car_1/vg_009.png"));
  EXPECT_EQ(a, TreeBytes(dir_ / "run_b"));
  EXPECT_EQ(a, TreeBytes(dir_ / "run_c"));
}

TEST_F(CliTest, PrepOnEmptySceneAndZeroRatio) {
  WriteSmallScene(640, 480);
  SceneLayout empty = layout_;
  empty.tracks.clear();
  Spit(dir_ / "empty.json", SerializeScene(empty));
  ASSERT_EQ(Run("prep --scene empty.json --camera front --out empty_manifest.json").exit_code, 0);
  EXPECT_TRUE(json::parse(Slurp(dir_ / "empty_manifest.json"))["clips"].empty());

  ASSERT_EQ(Run("prep --scene scene.json --camera front --min_height 10 --random_mask_ratio 0 --out m0.json").exit_code, 0);
  const json m0 = json::parse(Slurp(dir_ / "m0.json"));
  ASSERT_FALSE(m0["clips"].empty());
  for (const json& clip : m0["clips"]) EXPECT_TRUE(clip["random_masks"].empty());

  ASSERT_EQ(Run("prep --scene scene.json --camera front --min_height 10 --random_mask_ratio 1 --seed 3 --out m1.json").exit_code, 0);
  ASSERT_EQ(Run("prep --scene scene.json --camera front --min_height 10 --random_mask_ratio 1 --seed 3 --out m2.json").exit_code, 0);
  EXPECT_EQ(Slurp(dir_ / "m1.json"), Slurp(dir_ / "m2.json"));
  size_t masks = 0;
  const json m1 = json::parse(Slurp(dir_ / "m1.json"));
  for (const json& clip : m1["clips"]) masks += clip["random_masks"].size();
  EXPECT_GT(masks, 0u);
}

TEST_F(CliTest, EvalToleranceFlag) {
  WriteSmallScene();
  WriteDetections(0.06);
  const std::string base = "eval --scene scene.json --edits edits.json --detections dets.jsonl ";
  ASSERT_EQ(Run(base + "--out strict.json").exit_code, 0);
  const json strict = json::parse(Slurp(dir_ / "strict.json"));
  EXPECT_EQ(strict["counts"]["fn"], 10);
  ASSERT_EQ(Run(base + "--tol 0.10 --out loose.json").exit_code, 0);
  const json loose = json::parse(Slurp(dir_ / "loose.json"));
  EXPECT_EQ(loose["counts"]["fn"], 0);
  EXPECT_DOUBLE_EQ(loose["let_map"].get<double>(), 1.0);
  EXPECT_LT(loose["let_mapl"].get<double>(), loose["let_maph"].get<double>());
}

TEST_F(CliTest, EvalExactDetectionsScoreOne) {
  WriteSmallScene();
  WriteDetections(0.0);
  ASSERT_EQ(Run("eval --scene scene.json --edits edits.json --detections dets.jsonl --out m.json").exit_code, 0);
  const json m = json::parse(Slurp(dir_ / "m.json"));
  EXPECT_DOUBLE_EQ(m["let_map"].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(m["let_maph"].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(m["let_mapl"].get<double>(), 1.0);
}

TEST_F(CliTest, EvalWithoutGroundTruthExitsFour) {
  WriteSmallScene();
  WriteDetections(0.0);
  Spit(dir_ / "del.json", R"({"edits": [{"type": "delete", "object_id": "car_0"}]})");
  const RunResult r = Run("eval --scene scene.json --edits del.json --detections dets.jsonl --out m.json");
  EXPECT_EQ(r.exit_code, 4) << r.err;
}

TEST_F(CliTest, CropWritesSquare) {
  WriteSmallScene();
  Rgb8Image img(160, 128, 3, 90);
  Spit(dir_ / "frame.png", *EncodePng(img));
  ASSERT_EQ(Run("crop --scene scene.json --image frame.png --object car_0 --frame 2 --camera front --size 64 --out c.png").exit_code, 0);
  auto crop = DecodePng(Slurp(dir_ / "c.png"));
  ASSERT_TRUE(crop.ok());
  EXPECT_EQ(crop->width(), 64);
  EXPECT_EQ(crop->height(), 64);
}

}  // namespace
}  // namespace gsedit
