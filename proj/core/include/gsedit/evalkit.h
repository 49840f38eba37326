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

// Longitudinal-error-tolerant (LET) 3D detection matching and metrics.
//
// A detection is first slid along the camera line of sight onto the ground
// truth's range; it is a candidate when the slide is within
// lon_tolerance_frac * range and the slid box reaches the IoU threshold.
// Candidates are assigned greedily by descending score.
//
// Three average precisions are reported, each the trapezoidal area under the
// precision/recall curve swept over the distinct detection scores:
//   LET-mAP   true positives count 1
//   LET-mAPH  true positives count h = 1 - |heading error| / pi
//   LET-mAPL  true positives count h * a with a = 1 - min(|e|, tol) / tol
// Weights enter both the precision and the recall numerators. Since
// h * a <= h <= 1 the three are always ordered mAPL <= mAPH <= mAP.

#ifndef GSEDIT_EVALKIT_H_
#define GSEDIT_EVALKIT_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gsedit/geometry.h"
#include "gsedit/image.h"
#include "gsedit/layout.h"

namespace gsedit {

struct Detection {
  Box3D box;
  double score = 1.0;
  ObjectClass object_class = ObjectClass::kVehicle;
  int frame_index = 0;
  std::string camera_id;
  std::string object_id;  // optional, informational
};

struct GroundTruth {
  Box3D box;
  ObjectClass object_class = ObjectClass::kVehicle;
  std::string object_id;
};

struct EvalConfig {
  double lon_tolerance_frac = 0.05;
  double iou_threshold = 0.5;
  bool restrict_to_edited = true;

  absl::Status Validate() const;
};

struct LetAlignment {
  Box3D aligned;
  double lon_error = 0.0;  // signed, meters along the line of sight
  double range = 0.0;      // |gt center - camera center|
};

// DegenerateRange when the ground truth is closer than 0.5 m.
absl::StatusOr<LetAlignment> LetAlign(const Box3D& det, const Box3D& gt,
                                      const Vec3& camera_center);

// Area of the intersection of the two yaw-rotated footprints.
double BevIntersectionArea(const Box3D& a, const Box3D& b);

// BEV intersection x vertical overlap over the union of volumes.
double Iou3d(const Box3D& a, const Box3D& b);

struct LetMatch {
  size_t detection = 0;
  size_t ground_truth = 0;
  double score = 0.0;
  double lon_error = 0.0;
  double range = 0.0;
  double heading_error = 0.0;  // in [0, pi]
  double tolerance = 0.0;      // lon_tolerance_frac * range
  ObjectClass object_class = ObjectClass::kVehicle;
};

struct ScoredFalsePositive {
  size_t detection = 0;
  double score = 0.0;
  ObjectClass object_class = ObjectClass::kVehicle;
};

struct FrameMatchResult {
  std::vector<LetMatch> matches;
  std::vector<ScoredFalsePositive> false_positives;
  std::vector<size_t> missed;  // ground-truth indices
  std::vector<size_t> ignored;  // detections explained by non-evaluated objects
  std::map<ObjectClass, int> num_ground_truth;
};

// Greedy LET matching for one frame. Detections that fail to match
// `ground_truth` but LET-match one of `ignore` are dropped instead of being
// counted as false positives.
FrameMatchResult LetMatchFrame(std::span<const Detection> detections,
                               std::span<const GroundTruth> ground_truth,
                               const EvalConfig& config,
                               const Vec3& camera_center,
                               std::span<const GroundTruth> ignore = {});

struct ClipMatches {
  std::string clip_id;
  std::vector<FrameMatchResult> frames;
};

struct MetricCounts {
  int tp = 0;
  int fp = 0;
  int fn = 0;
};

struct ClipMetrics {
  std::string clip_id;
  double let_map = 0.0;
  double let_maph = 0.0;
  double let_mapl = 0.0;
  MetricCounts counts;
};

struct MetricsReport {
  double let_map = 0.0;
  double let_maph = 0.0;
  double let_mapl = 0.0;
  MetricCounts counts;
  std::map<ObjectClass, double> ap_per_class;
  std::vector<ClipMetrics> clips;
};

// NoGroundTruth when no clip has any ground truth.
absl::StatusOr<MetricsReport> ComputeMetrics(std::span<const ClipMatches> clips);

// 512x512 (by default) bilinear resize of the square window around the
// box's visible projection. NotVisible if the box is behind the camera or
// projects outside the image.
absl::StatusOr<RgbImage> CropEvalRegion(const RgbImage& frame,
                                        const Box3D& box,
                                        const CameraFrame& cam,
                                        int output_size = 512);

}  // namespace gsedit

#endif  // GSEDIT_EVALKIT_H_
