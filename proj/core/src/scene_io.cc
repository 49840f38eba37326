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

#include "gsedit/scene_io.h"

#include <cmath>
#include <initializer_list>
#include <numbers>
#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "gsedit/status.h"
#include "string_compat.h"
#include <nlohmann/json.hpp>

namespace gsedit {
namespace {

using nlohmann::json;

constexpr double kDegToRad = std::numbers::pi / 180.0;

// Thrown inside the parsers, converted to a ParseError at the API boundary.
struct ParseFailure {
  std::string message;
};

[[noreturn]] void Fail(std::string message) { throw ParseFailure{std::move(message)}; }

class Reader {
 public:
  explicit Reader(const ParseOptions& options) : options_(options) {}

  void CheckKeys(const json& obj, std::initializer_list<absl::string_view> allowed,
                 absl::string_view where) const {
    if (!obj.is_object()) Fail(absl::StrCat(where, " must be an object"));
    for (const auto& item : obj.items()) {
      bool known = false;
      for (absl::string_view a : allowed) known = known || item.key() == a;
      if (known) continue;
      const std::string msg = absl::StrCat("unknown field '", item.key(), "' in ", where);
      if (options_.strict) Fail(msg);
      if (options_.warnings != nullptr) options_.warnings->push_back(msg);
    }
  }

  const json& Field(const json& obj, absl::string_view key, absl::string_view where) const {
    auto it = obj.find(std::string(key));
    if (it == obj.end()) Fail(absl::StrCat("missing field '", key, "' in ", where));
    return *it;
  }

  double Number(const json& obj, absl::string_view key, absl::string_view where) const {
    const json& v = Field(obj, key, where);
    if (!v.is_number()) Fail(absl::StrCat("'", key, "' in ", where, " must be a number"));
    const double d = v.get<double>();
    if (!std::isfinite(d)) Fail(absl::StrCat("'", key, "' in ", where, " is not finite"));
    return d;
  }

  int Integer(const json& obj, absl::string_view key, absl::string_view where) const {
    const json& v = Field(obj, key, where);
    if (!v.is_number_integer()) {
      Fail(absl::StrCat("'", key, "' in ", where, " must be an integer"));
    }
    return v.get<int>();
  }

  std::string String(const json& obj, absl::string_view key, absl::string_view where) const {
    const json& v = Field(obj, key, where);
    if (!v.is_string()) Fail(absl::StrCat("'", key, "' in ", where, " must be a string"));
    return v.get<std::string>();
  }

  std::vector<double> Numbers(const json& obj, absl::string_view key, size_t n,
                              absl::string_view where) const {
    const json& v = Field(obj, key, where);
    if (!v.is_array() || v.size() != n) {
      Fail(absl::StrCat("'", key, "' in ", where, " must be an array of ", n, " numbers"));
    }
    std::vector<double> out;
    for (const json& e : v) {
      if (!e.is_number() || !std::isfinite(e.get<double>())) {
        Fail(absl::StrCat("'", key, "' in ", where, " has a non-numeric entry"));
      }
      out.push_back(e.get<double>());
    }
    return out;
  }

  Vec3 Vector3(const json& obj, absl::string_view key, absl::string_view where) const {
    const std::vector<double> v = Numbers(obj, key, 3, where);
    return Vec3(v[0], v[1], v[2]);
  }

  ObjectClass Class(const json& obj, absl::string_view where) const {
    const std::string name = String(obj, "class", where);
    auto cls = ParseObjectClass(name);
    if (!cls.ok()) Fail(absl::StrCat("unknown class '", name, "' in ", where));
    return *cls;
  }

  Box3D Box(const json& obj, absl::string_view where) const {
    Box3D box;
    box.center = Vector3(obj, "center", where);
    box.dims = Vector3(obj, "dims", where);
    box.yaw = WrapAngle(Number(obj, "yaw", where));
    return box;
  }

  ObjectTrack Track(const json& obj) const {
    CheckKeys(obj, {"object_id", "class", "boxes"}, "track");
    ObjectTrack track;
    track.object_id = String(obj, "object_id", "track");
    const std::string where = absl::StrCat("track '", track.object_id, "'");
    track.object_class = Class(obj, where);
    const json& boxes = Field(obj, "boxes", where);
    if (!boxes.is_array()) Fail(absl::StrCat("boxes of ", where, " must be an array"));
    for (const json& b : boxes) {
      CheckKeys(b, {"frame", "center", "dims", "yaw"}, absl::StrCat("box of ", where));
      const int frame = Integer(b, "frame", where);
      if (!track.boxes.emplace(frame, Box(b, where)).second) {
        Fail(absl::StrCat(where, " has two boxes in frame ", frame));
      }
    }
    return track;
  }

  EditCommand Edit(const json& obj, bool yaw_in_degrees) const {
    const std::string type = String(obj, "type", "edit");
    const std::string where = absl::StrCat(type, " edit");
    if (type == "reposition") {
      const char* yaw_key = yaw_in_degrees ? "delta_yaw_deg" : "delta_yaw";
      CheckKeys(obj, {"type", "object_id", yaw_key, "delta_t_local", "asset"}, where);
      Reposition r;
      r.object_id = String(obj, "object_id", where);
      if (obj.contains(yaw_key)) {
        r.delta_yaw = Number(obj, yaw_key, where);
        if (yaw_in_degrees) r.delta_yaw *= kDegToRad;
      }
      if (obj.contains("delta_t_local")) r.delta_t_local = Vector3(obj, "delta_t_local", where);
      if (obj.contains("asset")) r.asset_ref = String(obj, "asset", where);
      return r;
    }
    if (type == "insert") {
      CheckKeys(obj, {"type", "asset", "track"}, where);
      Insert ins;
      ins.asset_ref = String(obj, "asset", where);
      ins.track = Track(Field(obj, "track", where));
      return ins;
    }
    if (type == "delete") {
      CheckKeys(obj, {"type", "object_id"}, where);
      return Delete{String(obj, "object_id", where)};
    }
    Fail(absl::StrCat("unknown edit type '", type, "'"));
  }

 private:
  const ParseOptions& options_;
};

json Vec3Json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json BoxJson(const Box3D& box, int frame) {
  return {{"frame", frame},
          {"center", Vec3Json(box.center)},
          {"dims", Vec3Json(box.dims)},
          {"yaw", box.yaw}};
}

json TrackJson(const ObjectTrack& track) {
  json boxes = json::array();
  for (const auto& [frame, box] : track.boxes) boxes.push_back(BoxJson(box, frame));
  return {{"object_id", track.object_id},
          {"class", std::string(ObjectClassName(track.object_class))},
          {"boxes", std::move(boxes)}};
}

json EditJson(const EditCommand& cmd, bool yaw_in_degrees) {
  if (const auto* r = std::get_if<Reposition>(&cmd)) {
    json out = {{"type", "reposition"},
                {"object_id", r->object_id},
                {"delta_t_local", Vec3Json(r->delta_t_local)}};
    if (yaw_in_degrees) {
      out["delta_yaw_deg"] = r->delta_yaw / kDegToRad;
    } else {
      out["delta_yaw"] = r->delta_yaw;
    }
    if (!r->asset_ref.empty()) out["asset"] = r->asset_ref;
    return out;
  }
  if (const auto* ins = std::get_if<Insert>(&cmd)) {
    return {{"type", "insert"}, {"asset", ins->asset_ref}, {"track", TrackJson(ins->track)}};
  }
  return {{"type", "delete"}, {"object_id", std::get<Delete>(cmd).object_id}};
}

std::string Dump(const json& j) { return j.dump(2) + "\n"; }

json ParseJson(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    Fail(absl::StrCat("invalid JSON: ", e.what()));
  }
}

template <typename Fn>
auto Guarded(Fn&& fn) -> absl::StatusOr<decltype(fn())> {
  try {
    return fn();
  } catch (const ParseFailure& f) {
    return MakeError(ErrorCode::kParseError, f.message);
  } catch (const json::exception& e) {
    return MakeError(ErrorCode::kParseError, e.what());
  }
}

}  // namespace

absl::StatusOr<SceneLayout> ParseScene(std::string_view text,
                                       const ParseOptions& options) {
  GSEDIT_ASSIGN_OR_RETURN(SceneLayout layout, Guarded([&] {
    const Reader r(options);
    const json doc = ParseJson(text);
    r.CheckKeys(doc, {"version", "convention", "num_frames", "cameras", "tracks"}, "scene");
    const int version = r.Integer(doc, "version", "scene");
    if (version != kSceneFormatVersion) {
      Fail(absl::StrCat("unsupported scene version ", version));
    }
    if (doc.contains("convention")) {
      const json& conv = doc["convention"];
      r.CheckKeys(conv, {"camera", "yaw_zero"}, "convention");
      if (conv.contains("camera") &&
          r.String(conv, "camera", "convention") != "+z forward,+y down") {
        Fail("camera convention must be \"+z forward,+y down\"");
      }
      if (conv.contains("yaw_zero") && r.String(conv, "yaw_zero", "convention") != "+x") {
        Fail("yaw_zero convention must be \"+x\"");
      }
    }
    SceneLayout layout;
    layout.num_frames = r.Integer(doc, "num_frames", "scene");
    const json& cams = r.Field(doc, "cameras", "scene");
    if (!cams.is_array()) Fail("cameras must be an array");
    for (const json& c : cams) {
      r.CheckKeys(c, {"frame", "camera_id", "intrinsics", "cam_to_world", "image"}, "camera");
      CameraFrame cam;
      cam.frame_index = r.Integer(c, "frame", "camera");
      cam.camera_id = r.String(c, "camera_id", "camera");
      const std::string where =
          absl::StrCat("camera '", cam.camera_id, "' frame ", cam.frame_index);
      const json& k = r.Field(c, "intrinsics", where);
      r.CheckKeys(k, {"fx", "fy", "cx", "cy", "width", "height"}, "intrinsics");
      cam.intrinsics.fx = r.Number(k, "fx", where);
      cam.intrinsics.fy = r.Number(k, "fy", where);
      cam.intrinsics.cx = r.Number(k, "cx", where);
      cam.intrinsics.cy = r.Number(k, "cy", where);
      cam.intrinsics.width = r.Integer(k, "width", where);
      cam.intrinsics.height = r.Integer(k, "height", where);
      const std::vector<double> m = r.Numbers(c, "cam_to_world", 16, where);
      if (m[12] != 0.0 || m[13] != 0.0 || m[14] != 0.0 || m[15] != 1.0) {
        Fail(absl::StrCat("cam_to_world of ", where, " must end in 0 0 0 1"));
      }
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) cam.cam_to_world.rotation(i, j) = m[4 * i + j];
        cam.cam_to_world.translation(i) = m[4 * i + 3];
      }
      const CameraKey key(cam.frame_index, cam.camera_id);
      if (c.contains("image")) layout.source_images[key] = r.String(c, "image", where);
      if (!layout.cameras.emplace(key, cam).second) Fail(absl::StrCat("duplicate ", where));
    }
    const json& tracks = r.Field(doc, "tracks", "scene");
    if (!tracks.is_array()) Fail("tracks must be an array");
    for (const json& t : tracks) layout.tracks.push_back(r.Track(t));
    return layout;
  }));
  GSEDIT_RETURN_IF_ERROR(layout.Validate());
  return layout;
}

std::string SerializeScene(const SceneLayout& layout) {
  json cams = json::array();
  for (const auto& [key, cam] : layout.cameras) {
    json m = json::array();
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) m.push_back(cam.cam_to_world.rotation(i, j));
      m.push_back(cam.cam_to_world.translation(i));
    }
    for (double v : {0.0, 0.0, 0.0, 1.0}) m.push_back(v);
    const CameraIntrinsics& k = cam.intrinsics;
    json c = {{"frame", cam.frame_index},
              {"camera_id", cam.camera_id},
              {"intrinsics",
               {{"fx", k.fx}, {"fy", k.fy}, {"cx", k.cx}, {"cy", k.cy},
                {"width", k.width}, {"height", k.height}}},
              {"cam_to_world", std::move(m)}};
    auto img = layout.source_images.find(key);
    if (img != layout.source_images.end()) c["image"] = img->second;
    cams.push_back(std::move(c));
  }
  json tracks = json::array();
  for (const ObjectTrack& t : layout.tracks) tracks.push_back(TrackJson(t));
  json doc = {{"version", kSceneFormatVersion},
              {"convention", {{"camera", "+z forward,+y down"}, {"yaw_zero", "+x"}}},
              {"num_frames", layout.num_frames},
              {"cameras", std::move(cams)},
              {"tracks", std::move(tracks)}};
  return Dump(doc);
}

absl::StatusOr<std::vector<EditCommand>> ParseEdits(std::string_view text,
                                                    const ParseOptions& options) {
  return Guarded([&] {
    const Reader r(options);
    const json doc = ParseJson(text);
    r.CheckKeys(doc, {"edits"}, "edits file");
    const json& edits = r.Field(doc, "edits", "edits file");
    if (!edits.is_array()) Fail("edits must be an array");
    std::vector<EditCommand> out;
    for (const json& e : edits) out.push_back(r.Edit(e, /*yaw_in_degrees=*/true));
    return out;
  });
}

std::string SerializeEdits(std::span<const EditCommand> edits) {
  json arr = json::array();
  for (const EditCommand& e : edits) arr.push_back(EditJson(e, true));
  return Dump(json{{"edits", std::move(arr)}});
}

absl::StatusOr<std::vector<Detection>> ParseDetections(std::string_view text,
                                                       const ParseOptions& options) {
  GSEDIT_ASSIGN_OR_RETURN(std::vector<Detection> dets, Guarded([&] {
    const Reader r(options);
    std::vector<Detection> out;
    int line_no = 0;
    for (absl::string_view line : absl::StrSplit(Sv(text), '\n')) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == absl::string_view::npos) continue;
      const std::string where = absl::StrCat("detection on line ", line_no);
      const json obj = ParseJson(StdSv(line));
      r.CheckKeys(obj, {"frame_index", "camera_id", "object_id", "center", "dims",
                        "yaw", "score", "class"}, where);
      Detection d;
      d.frame_index = r.Integer(obj, "frame_index", where);
      d.camera_id = r.String(obj, "camera_id", where);
      if (obj.contains("object_id")) d.object_id = r.String(obj, "object_id", where);
      d.box = r.Box(obj, where);
      d.score = r.Number(obj, "score", where);
      if (d.score < 0.0 || d.score > 1.0) Fail(absl::StrCat("score of ", where, " outside [0, 1]"));
      d.object_class = r.Class(obj, where);
      out.push_back(std::move(d));
    }
    return out;
  }));
  for (const Detection& d : dets) {
    if (absl::Status s = d.box.Validate(); !s.ok()) {
      return MakeError(ErrorCode::kParseError, absl::StrCat("detection box: ", s.message()));
    }
  }
  return dets;
}

std::string SerializeDetections(std::span<const Detection> detections) {
  std::string out;
  for (const Detection& d : detections) {
    json obj = {{"frame_index", d.frame_index},
                {"camera_id", d.camera_id},
                {"center", Vec3Json(d.box.center)},
                {"dims", Vec3Json(d.box.dims)},
                {"yaw", d.box.yaw},
                {"score", d.score},
                {"class", std::string(ObjectClassName(d.object_class))}};
    if (!d.object_id.empty()) obj["object_id"] = d.object_id;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

std::string SerializeMetricsReport(const MetricsReport& report,
                                   const EvalConfig& config) {
  auto counts = [](const MetricCounts& c) {
    return json{{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}};
  };
  json per_class = json::object();
  for (const auto& [cls, ap] : report.ap_per_class) {
    per_class[std::string(ObjectClassName(cls))] = ap;
  }
  json clips = json::array();
  for (const ClipMetrics& c : report.clips) {
    clips.push_back({{"clip_id", c.clip_id},
                     {"let_map", c.let_map},
                     {"let_maph", c.let_maph},
                     {"let_mapl", c.let_mapl},
                     {"counts", counts(c.counts)}});
  }
  json doc = {{"config",
               {{"lon_tolerance_frac", config.lon_tolerance_frac},
                {"iou_threshold", config.iou_threshold},
                {"restrict_to_edited", config.restrict_to_edited}}},
              {"let_map", report.let_map},
              {"let_maph", report.let_maph},
              {"let_mapl", report.let_mapl},
              {"counts", counts(report.counts)},
              {"ap_per_class", std::move(per_class)},
              {"clips", std::move(clips)}};
  return Dump(doc);
}

std::string SerializeClipMeta(const ClipMeta& meta) {
  json doc = {{"object_id", meta.object_id},
              {"start_frame", meta.start_frame},
              {"num_frames", meta.num_frames},
              {"camera_id", meta.camera_id},
              {"seed", meta.seed},
              {"edit", EditJson(meta.edit, false)}};
  return Dump(doc);
}

absl::StatusOr<ClipMeta> ParseClipMeta(std::string_view text) {
  const ParseOptions strict{.strict = true};
  return Guarded([&] {
    const Reader r(strict);
    const json doc = ParseJson(text);
    r.CheckKeys(doc, {"object_id", "start_frame", "num_frames", "camera_id", "seed", "edit"},
                "clip_meta");
    ClipMeta meta;
    meta.object_id = r.String(doc, "object_id", "clip_meta");
    meta.start_frame = r.Integer(doc, "start_frame", "clip_meta");
    meta.num_frames = r.Integer(doc, "num_frames", "clip_meta");
    meta.camera_id = r.String(doc, "camera_id", "clip_meta");
    const json& seed = r.Field(doc, "seed", "clip_meta");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<int64_t>() >= 0)) {
      Fail("seed must be a non-negative integer");
    }
    meta.seed = seed.get<uint64_t>();
    meta.edit = r.Edit(r.Field(doc, "edit", "clip_meta"), /*yaw_in_degrees=*/false);
    return meta;
  });
}

}  // namespace gsedit
