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

#include "gsedit/evalkit.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <tuple>

#include "absl/strings/str_cat.h"
#include "gsedit/dataprep.h"
#include "gsedit/status.h"

namespace gsedit {
namespace {

constexpr double kMinRange = 0.5;

using Polygon = std::vector<Vec2>;

Polygon Footprint(const Box3D& box) {
  const std::array<Vec3, 8> c = BoxCorners(box);
  // Bottom face is counter-clockwise seen from above.
  return {c[0].head<2>(), c[1].head<2>(), c[2].head<2>(), c[3].head<2>()};
}

double Cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double PolygonArea(const Polygon& p) {
  double area = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    area += Cross(p[i], p[(i + 1) % p.size()]);
  }
  return 0.5 * area;
}

// Sutherland-Hodgman clip of `subject` by the convex CCW polygon `clip`.
Polygon ClipConvex(Polygon subject, const Polygon& clip) {
  for (size_t e = 0; e < clip.size() && !subject.empty(); ++e) {
    const Vec2& a = clip[e];
    const Vec2& b = clip[(e + 1) % clip.size()];
    const Vec2 edge = b - a;
    auto side = [&](const Vec2& p) { return Cross(edge, p - a); };
    Polygon out;
    for (size_t i = 0; i < subject.size(); ++i) {
      const Vec2& p = subject[i];
      const Vec2& q = subject[(i + 1) % subject.size()];
      const double sp = side(p);
      const double sq = side(q);
      if (sp >= 0.0) out.push_back(p);
      if ((sp >= 0.0) != (sq >= 0.0)) {
        const double t = sp / (sp - sq);
        out.push_back(p + t * (q - p));
      }
    }
    subject = std::move(out);
  }
  return subject;
}

double HeadingError(double a, double b) { return std::abs(WrapAngle(a - b)); }

struct ScoredItem {
  double score;
  bool tp;
  double heading_weight;
  double longitudinal_weight;
};

struct ApTriple {
  double ap = 0.0, aph = 0.0, apl = 0.0;
};

// Trapezoidal area under the PR curve with operating points at every
// distinct score, anchored at (0, first precision).
double AreaUnderPr(std::span<const ScoredItem> items, int num_gt,
                   double ScoredItem::*weight) {
  if (num_gt <= 0 || items.empty()) return 0.0;
  double cum_w = 0.0;
  double cum_n = 0.0;
  double prev_r = 0.0;
  double prev_p = -1.0;
  double area = 0.0;
  size_t i = 0;
  while (i < items.size()) {
    size_t j = i;
    while (j < items.size() && items[j].score == items[i].score) {
      if (items[j].tp) cum_w += items[j].*weight;
      cum_n += 1.0;
      ++j;
    }
    const double p = cum_w / cum_n;
    const double r = cum_w / num_gt;
    if (prev_p < 0.0) prev_p = p;
    area += (r - prev_r) * 0.5 * (p + prev_p);
    prev_r = r;
    prev_p = p;
    i = j;
  }
  return area;
}

ApTriple AveragePrecisions(std::vector<ScoredItem> items, int num_gt) {
  std::sort(items.begin(), items.end(), [](const ScoredItem& a, const ScoredItem& b) {
    return std::tie(b.score, a.tp, a.heading_weight, a.longitudinal_weight) <
           std::tie(a.score, b.tp, b.heading_weight, b.longitudinal_weight);
  });
  ApTriple out;
  std::vector<ScoredItem> unit = items;
  for (ScoredItem& s : unit) s.heading_weight = 1.0;
  out.ap = AreaUnderPr(unit, num_gt, &ScoredItem::heading_weight);
  out.aph = AreaUnderPr(items, num_gt, &ScoredItem::heading_weight);
  out.apl = AreaUnderPr(items, num_gt, &ScoredItem::longitudinal_weight);
  return out;
}

struct ClassTally {
  std::vector<ScoredItem> items;
  int num_gt = 0;
  MetricCounts counts;
};

void Accumulate(const ClipMatches& clip, std::map<ObjectClass, ClassTally>& tally) {
  for (const FrameMatchResult& frame : clip.frames) {
    for (const auto& [cls, n] : frame.num_ground_truth) tally[cls].num_gt += n;
    for (const LetMatch& m : frame.matches) {
      const double h = 1.0 - m.heading_error / std::numbers::pi;
      const double a =
          m.tolerance > 0.0
              ? 1.0 - std::min(std::abs(m.lon_error), m.tolerance) / m.tolerance
              : (m.lon_error == 0.0 ? 1.0 : 0.0);
      ClassTally& t = tally[m.object_class];
      t.items.push_back({m.score, true, h, h * a});
      ++t.counts.tp;
    }
    for (const ScoredFalsePositive& fp : frame.false_positives) {
      ClassTally& t = tally[fp.object_class];
      t.items.push_back({fp.score, false, 0.0, 0.0});
      ++t.counts.fp;
    }
  }
}

struct Summary {
  ApTriple mean;
  MetricCounts counts;
  std::map<ObjectClass, double> ap_per_class;
  int num_gt = 0;
};

Summary Summarize(const std::map<ObjectClass, ClassTally>& tally) {
  Summary s;
  int classes = 0;
  for (const auto& [cls, t] : tally) {
    s.counts.tp += t.counts.tp;
    s.counts.fp += t.counts.fp;
    s.counts.fn += t.num_gt - t.counts.tp;
    s.num_gt += t.num_gt;
    if (t.num_gt == 0) continue;
    const ApTriple ap = AveragePrecisions(t.items, t.num_gt);
    s.ap_per_class[cls] = ap.ap;
    s.mean.ap += ap.ap;
    s.mean.aph += ap.aph;
    s.mean.apl += ap.apl;
    ++classes;
  }
  if (classes > 0) {
    s.mean.ap /= classes;
    s.mean.aph /= classes;
    s.mean.apl /= classes;
  }
  return s;
}

// Strict weak order making matching independent of input order.
bool DetectionBefore(const Detection& a, const Detection& b) {
  auto key = [](const Detection& d) {
    return std::make_tuple(-d.score, d.box.center.x(), d.box.center.y(),
                           d.box.center.z(), d.box.dims.x(), d.box.dims.y(),
                           d.box.dims.z(), d.box.yaw,
                           static_cast<int>(d.object_class));
  };
  return key(a) < key(b);
}

struct Candidate {
  bool ok = false;
  double iou = 0.0;
  LetAlignment alignment;
};

Candidate Evaluate(const Detection& det, const GroundTruth& gt,
                   const EvalConfig& config, const Vec3& camera_center) {
  Candidate c;
  if (det.object_class != gt.object_class) return c;
  auto aligned = LetAlign(det.box, gt.box, camera_center);
  if (!aligned.ok()) return c;
  if (std::abs(aligned->lon_error) > config.lon_tolerance_frac * aligned->range) {
    return c;
  }
  const double iou = Iou3d(aligned->aligned, gt.box);
  if (iou < config.iou_threshold) return c;
  c.ok = true;
  c.iou = iou;
  c.alignment = *aligned;
  return c;
}

}  // namespace

absl::Status EvalConfig::Validate() const {
  if (!(lon_tolerance_frac > 0.0)) {
    return MakeError(ErrorCode::kInvalidArgument,
                     "lon_tolerance_frac must be positive");
  }
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    return MakeError(ErrorCode::kInvalidArgument,
                     "iou_threshold must lie in (0, 1]");
  }
  return absl::OkStatus();
}

absl::StatusOr<LetAlignment> LetAlign(const Box3D& det, const Box3D& gt,
                                      const Vec3& camera_center) {
  const Vec3 los = gt.center - camera_center;
  const double range = los.norm();
  if (!(range >= kMinRange)) {
    return MakeError(ErrorCode::kDegenerateRange,
                     absl::StrCat("ground truth range ", range, " m below ",
                                  kMinRange, " m"));
  }
  const Vec3 u = los / range;
  LetAlignment out;
  out.lon_error = (det.center - gt.center).dot(u);
  out.range = range;
  out.aligned = det;
  out.aligned.center = det.center - out.lon_error * u;
  return out;
}

double BevIntersectionArea(const Box3D& a, const Box3D& b) {
  const Polygon inter = ClipConvex(Footprint(a), Footprint(b));
  if (inter.size() < 3) return 0.0;
  return std::max(0.0, PolygonArea(inter));
}

double Iou3d(const Box3D& a, const Box3D& b) {
  const double za0 = a.center.z() - 0.5 * a.dims.z();
  const double za1 = a.center.z() + 0.5 * a.dims.z();
  const double zb0 = b.center.z() - 0.5 * b.dims.z();
  const double zb1 = b.center.z() + 0.5 * b.dims.z();
  const double dz = std::min(za1, zb1) - std::max(za0, zb0);
  if (dz <= 0.0) return 0.0;
  const double inter = BevIntersectionArea(a, b) * dz;
  if (inter <= 0.0) return 0.0;
  const double va = a.dims.prod();
  const double vb = b.dims.prod();
  const double uni = va + vb - inter;
  if (!(uni > 0.0)) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

FrameMatchResult LetMatchFrame(std::span<const Detection> detections,
                               std::span<const GroundTruth> ground_truth,
                               const EvalConfig& config,
                               const Vec3& camera_center,
                               std::span<const GroundTruth> ignore) {
  FrameMatchResult result;
  for (const GroundTruth& gt : ground_truth) ++result.num_ground_truth[gt.object_class];

  std::vector<size_t> order(detections.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return DetectionBefore(detections[a], detections[b]);
  });

  std::vector<bool> taken(ground_truth.size(), false);
  for (size_t di : order) {
    const Detection& det = detections[di];
    size_t best = ground_truth.size();
    Candidate best_candidate;
    for (size_t gi = 0; gi < ground_truth.size(); ++gi) {
      if (taken[gi]) continue;
      const Candidate c = Evaluate(det, ground_truth[gi], config, camera_center);
      if (c.ok && (best == ground_truth.size() || c.iou > best_candidate.iou)) {
        best = gi;
        best_candidate = c;
      }
    }
    if (best < ground_truth.size()) {
      taken[best] = true;
      const double range = best_candidate.alignment.range;
      result.matches.push_back(LetMatch{
          di, best, det.score, best_candidate.alignment.lon_error, range,
          HeadingError(det.box.yaw, ground_truth[best].box.yaw),
          config.lon_tolerance_frac * range, det.object_class});
      continue;
    }
    bool explained = false;
    for (const GroundTruth& other : ignore) {
      if (Evaluate(det, other, config, camera_center).ok) {
        explained = true;
        break;
      }
    }
    if (explained) {
      result.ignored.push_back(di);
    } else {
      result.false_positives.push_back({di, det.score, det.object_class});
    }
  }
  for (size_t gi = 0; gi < ground_truth.size(); ++gi) {
    if (!taken[gi]) result.missed.push_back(gi);
  }
  return result;
}

absl::StatusOr<MetricsReport> ComputeMetrics(std::span<const ClipMatches> clips) {
  std::map<ObjectClass, ClassTally> all;
  MetricsReport report;
  for (const ClipMatches& clip : clips) {
    Accumulate(clip, all);
    std::map<ObjectClass, ClassTally> one;
    Accumulate(clip, one);
    const Summary s = Summarize(one);
    report.clips.push_back(
        ClipMetrics{clip.clip_id, s.mean.ap, s.mean.aph, s.mean.apl, s.counts});
  }
  const Summary total = Summarize(all);
  if (total.num_gt == 0) {
    return MakeError(ErrorCode::kNoGroundTruth, "no ground truth in any clip");
  }
  report.let_map = total.mean.ap;
  report.let_maph = total.mean.aph;
  report.let_mapl = total.mean.apl;
  report.counts = total.counts;
  report.ap_per_class = total.ap_per_class;
  return report;
}

absl::StatusOr<RgbImage> CropEvalRegion(const RgbImage& frame, const Box3D& box,
                                        const CameraFrame& cam,
                                        int output_size) {
  const int w = cam.intrinsics.width;
  const int h = cam.intrinsics.height;
  if (frame.width() != w || frame.height() != h) {
    return MakeError(ErrorCode::kShapeMismatch, "frame does not match camera");
  }
  const std::optional<PixelRect> rect = ProjectedBoxRect(box, cam);
  const std::optional<PixelRect> visible =
      rect ? ClipToImage(*rect, w, h) : std::nullopt;
  if (!visible) {
    return MakeError(ErrorCode::kNotVisible, "box does not project into the image");
  }
  PixelRect square_source = *visible;
  const double limit = std::min(w, h);
  if (std::max(square_source.width(), square_source.height()) > limit) {
    // Keep the center; the window is capped at the short image side.
    const double cx = 0.5 * (square_source.x0 + square_source.x1);
    const double cy = 0.5 * (square_source.y0 + square_source.y1);
    square_source = {cx - 0.5 * limit, cy - 0.5 * limit, cx + 0.5 * limit,
                     cy + 0.5 * limit};
  }
  GSEDIT_ASSIGN_OR_RETURN(const SquareCrop crop, SquareAround(square_source, w, h));
  return ResizeBilinear(ExtractCrop(frame, crop), output_size, output_size);
}

}  // namespace gsedit
