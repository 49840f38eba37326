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

#include "synthetic.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "absl/strings/str_format.h"
#include "gsedit/dataprep.h"
#include "gsedit/geometry.h"

namespace gsedit::tools {
namespace {

constexpr double kCarHeight = 1.45;

Gaussian3D Splat(const Vec3& p, const Vec3& color, Rng& rng) {
  Gaussian3D g;
  g.mean = p;
  g.scale = Vec3(rng.Uniform(0.04, 0.08), rng.Uniform(0.04, 0.08),
                 rng.Uniform(0.03, 0.06));
  Eigen::Vector4d q(rng.Uniform(-1, 1), rng.Uniform(-1, 1), rng.Uniform(-1, 1),
                    rng.Uniform(-1, 1));
  if (q.norm() < 1e-3) q = Eigen::Vector4d(1, 0, 0, 0);
  q.normalize();
  g.rotation = Eigen::Quaterniond(q[0], q[1], q[2], q[3]);
  g.opacity = rng.Uniform(0.6, 0.95);
  for (int c = 0; c < 3; ++c) {
    g.color[c] = std::clamp(color[c] + rng.Uniform(-0.04, 0.04), 0.0, 1.0);
  }
  return g;
}

// Uniform point on the surface of an axis-aligned box.
Vec3 BoxSurfacePoint(const Vec3& lo, const Vec3& hi, Rng& rng) {
  const Vec3 d = hi - lo;
  const double areas[3] = {d.y() * d.z(), d.x() * d.z(), d.x() * d.y()};
  double pick = rng.Uniform() * (areas[0] + areas[1] + areas[2]);
  int axis = 0;
  while (axis < 2 && pick >= areas[axis]) pick -= areas[axis++];
  Vec3 p(rng.Uniform(lo.x(), hi.x()), rng.Uniform(lo.y(), hi.y()),
         rng.Uniform(lo.z(), hi.z()));
  p[axis] = rng.Bernoulli(0.5) ? lo[axis] : hi[axis];
  return p;
}

void AddBox(const Vec3& lo, const Vec3& hi, const Vec3& color, int count, Rng& rng,
            GaussianCloud& cloud) {
  for (int i = 0; i < count; ++i) {
    cloud.gaussians.push_back(Splat(BoxSurfacePoint(lo, hi, rng), color, rng));
  }
}

void AddWheel(const Vec3& center, double radius, double width, int count, Rng& rng,
              GaussianCloud& cloud) {
  const Vec3 rubber(0.07, 0.07, 0.08);
  for (int i = 0; i < count; ++i) {
    const double theta = rng.Uniform(0.0, 2.0 * std::numbers::pi);
    const double r = i % 3 == 0 ? radius * std::sqrt(rng.Uniform()) : radius;
    const double y = i % 3 == 0 ? (rng.Bernoulli(0.5) ? 0.5 : -0.5) * width
                                : rng.Uniform(-0.5 * width, 0.5 * width);
    const Vec3 p = center + Vec3(r * std::cos(theta), y, r * std::sin(theta));
    cloud.gaussians.push_back(Splat(p, rubber, rng));
  }
}

CameraFrame DemoCamera(int frame) {
  CameraFrame cam;
  cam.intrinsics = {800.0, 800.0, 480.0, 320.0, 960, 640};
  cam.camera_id = kDemoCamera;
  cam.frame_index = frame;
  // Camera +z along world +x, +x along world -y, +y along world -z.
  cam.cam_to_world.rotation << 0, 0, 1, -1, 0, 0, 0, -1, 0;
  cam.cam_to_world.translation = Vec3(0.5 * frame, 0.0, 1.6);
  return cam;
}

ObjectTrack StaticTrack(std::string id, const Box3D& box, int num_frames) {
  ObjectTrack t;
  t.object_id = std::move(id);
  t.object_class = ObjectClass::kVehicle;
  for (int f = 0; f < num_frames; ++f) t.boxes[f] = box;
  return t;
}

}  // namespace

GaussianCloud ProceduralCar(uint64_t seed) {
  Rng rng(seed);
  GaussianCloud car;
  car.frame = CoordinateFrame::kLocal;
  const Vec3 paint(0.72, 0.12, 0.10);
  const Vec3 glass(0.18, 0.22, 0.28);
  AddBox(Vec3(-2.2, -0.9, 0.25), Vec3(2.2, 0.9, 0.95), paint, 1100, rng, car);
  AddBox(Vec3(-1.3, -0.78, 0.95), Vec3(0.9, 0.78, 1.45), glass, 500, rng, car);
  for (double x : {-1.4, 1.4}) {
    for (double y : {-0.82, 0.82}) {
      AddWheel(Vec3(x, y, 0.33), 0.33, 0.22, 100, rng, car);
    }
  }
  for (Gaussian3D& g : car.gaussians) g.mean.z() -= 0.5 * kCarHeight;
  return car;
}

RgbImage ProceduralBackground(const CameraFrame& cam) {
  const CameraIntrinsics& k = cam.intrinsics;
  RgbImage img(k.width, k.height, 3);
  const Mat3& r = cam.cam_to_world.rotation;
  const Vec3& o = cam.cam_to_world.translation;
  for (int y = 0; y < k.height; ++y) {
    for (int x = 0; x < k.width; ++x) {
      const Vec3 ray = r * Vec3((x - k.cx) / k.fx, (y - k.cy) / k.fy, 1.0);
      Vec3 color;
      if (ray.z() < -1e-9 && o.z() > 0.0) {
        const double t = -o.z() / ray.z();
        const Vec3 p = o + t * ray;
        const long cell = static_cast<long>(std::floor(p.x() / 2.0)) +
                          static_cast<long>(std::floor(p.y() / 2.0));
        const double base = (cell & 1) ? 0.42 : 0.34;
        const double haze = 1.0 - std::exp(-t * ray.norm() / 120.0);
        color = Vec3::Constant(base * (1.0 - haze) + 0.7 * haze);
      } else {
        const double e = std::clamp(ray.z() / ray.norm(), 0.0, 1.0);
        color = Vec3(0.62 - 0.25 * e, 0.74 - 0.18 * e, 0.92 - 0.05 * e);
      }
      for (int c = 0; c < 3; ++c) img(x, y, c) = color[c];
    }
  }
  return img;
}

RgbImage CompositeSourceFrame(const SceneLayout& layout, const CameraFrame& cam,
                              const GaussianCloud& asset) {
  GaussianCloud scene;
  scene.frame = CoordinateFrame::kWorld;
  for (const ObjectTrack& t : layout.tracks) {
    const Box3D* box = t.BoxAt(cam.frame_index);
    if (box == nullptr) continue;
    auto placed = PlaceAsset(asset, *box);
    if (!placed.ok()) continue;
    scene.gaussians.insert(scene.gaussians.end(), placed->gaussians.begin(),
                           placed->gaussians.end());
  }
  RgbImage out = ProceduralBackground(cam);
  const RenderedFrame fg = Render(scene, cam);
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      const double a = fg.alpha(x, y);
      for (int c = 0; c < 3; ++c) {
        out(x, y, c) = fg.rgb(x, y, c) + (1.0 - a) * out(x, y, c);
      }
    }
  }
  return out;
}

DemoScene MakeDemoScene(uint64_t seed) {
  constexpr int kFrames = 10;
  DemoScene demo;
  demo.car = ProceduralCar(DeriveSeed(seed, 0));
  SceneLayout& layout = demo.layout;
  layout.num_frames = kFrames;
  for (int f = 0; f < kFrames; ++f) {
    const CameraFrame cam = DemoCamera(f);
    layout.cameras[CameraKey(f, cam.camera_id)] = cam;
    layout.source_images[CameraKey(f, cam.camera_id)] =
        absl::StrFormat("frames/%s_%03d.png", kDemoCamera, f);
  }
  layout.tracks.push_back(StaticTrack(
      "car_0", Box3D{Vec3(14.0, -1.0, 0.75), Vec3(4.5, 1.9, 1.5), 0.1}, kFrames));
  layout.tracks.push_back(StaticTrack(
      "car_1", Box3D{Vec3(20.0, 4.0, 0.75), Vec3(4.2, 1.8, 1.5), -0.2}, kFrames));
  layout.tracks.push_back(StaticTrack(
      "car_2", Box3D{Vec3(26.0, -4.5, 0.8), Vec3(4.6, 1.9, 1.6), std::numbers::pi - 0.05},
      kFrames));
  for (int f = 0; f < kFrames; ++f) {
    const CameraFrame& cam = layout.cameras.at(CameraKey(f, kDemoCamera));
    demo.frames[CameraKey(f, kDemoCamera)] = CompositeSourceFrame(layout, cam, demo.car);
  }

  Reposition rotate;
  rotate.object_id = "car_0";
  rotate.delta_yaw = -5.0 * std::numbers::pi / 180.0;
  rotate.asset_ref = kDemoAsset;
  Reposition shift;
  shift.object_id = "car_1";
  shift.delta_t_local = Vec3(0.0, 1.0, 0.0);
  shift.asset_ref = kDemoAsset;
  Insert insert;
  insert.asset_ref = kDemoAsset;
  insert.track = StaticTrack(
      "car_3", Box3D{Vec3(22.0, 0.5, 0.75), Vec3(4.3, 1.8, 1.5), 0.0}, kFrames);
  demo.edits = {rotate, shift, insert, Delete{"car_2"}};
  return demo;
}

std::vector<Detection> ExactDetections(const SceneLayout& edited,
                                       const std::vector<std::string>& ids) {
  std::vector<Detection> out;
  for (const auto& [key, cam] : edited.cameras) {
    for (const std::string& id : ids) {
      const ObjectTrack* t = edited.FindTrack(id);
      if (t == nullptr) continue;
      const Box3D* box = t->BoxAt(key.first);
      if (box == nullptr) continue;
      out.push_back(Detection{*box, 1.0, t->object_class, key.first, key.second, id});
    }
  }
  return out;
}

}  // namespace gsedit::tools
