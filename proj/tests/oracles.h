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

// Independent reference computations used by the unit tests and the
// acceptance runner. Nothing here calls the library routine it checks.

#ifndef GSEDIT_TESTS_ORACLES_H_
#define GSEDIT_TESTS_ORACLES_H_

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gsedit/editing.h"
#include "gsedit/gaussians.h"
#include "gsedit/geometry.h"
#include "gsedit/layout.h"

namespace gsedit::oracle {

using Matrix3 = std::array<std::array<double, 3>, 3>;

// Rotation matrix of a unit quaternion (w, x, y, z), written out by hand.
Matrix3 QuaternionMatrix(double w, double x, double y, double z);
Matrix3 MatMul(const Matrix3& a, const Matrix3& b);
Matrix3 Transpose(const Matrix3& a);
Matrix3 FromEigen(const Mat3& m);

// W R S S^T R^T W^T with plain loops.
Matrix3 DenseWorldCovariance(const Gaussian3D& local, const Mat3& w);

// Camera at `eye` looking at `target`, world z up.
CameraFrame LookAtCamera(const Vec3& eye, const Vec3& target, int width,
                         int height, double focal, int frame = 0,
                         const std::string& id = "cam");

// Random local-frame cloud within a cube of half-size `extent`.
GaussianCloud RandomCloud(std::mt19937_64& rng, int count, double extent);

// Straightforward per-pixel renderer: projects every Gaussian with its own
// EWA arithmetic, sorts by depth and blends with the shared traversal rules.
RenderedFrame ReferenceRender(const GaussianCloud& world_cloud,
                              const CameraFrame& cam,
                              const RasterConfig& config = {});

// Camera-space depth of the first hit of the pixel ray with the box, 0 on a
// miss. Slab test in the box frame.
double RayBoxDepth(const CameraFrame& cam, int u, int v, const Box3D& box);

// IoU estimate from an n x n x n grid over the union bounding box.
double GridIou(const Box3D& a, const Box3D& b, int n = 200);

// Sliding-window enumeration of clip windows.
std::vector<ClipWindow> BruteForceClips(const SceneLayout& layout,
                                        const std::string& camera_id,
                                        int num_frames, double min_height_px,
                                        int max_neighbors, double radius_m);

// N x 14 x (H/8) x (W/8) stack recomputed from the bundle's 8-bit planes
// with the block-average mock encoder; channels [0, 4) are zero.
ChannelStack RecomputeStack(const ConditioningBundle& bundle);

}  // namespace gsedit::oracle

#endif  // GSEDIT_TESTS_ORACLES_H_
