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

#ifndef GSEDIT_PARALLEL_H_
#define GSEDIT_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace gsedit {

// Runs fn(i) for i in [0, n) on up to `num_threads` workers. Work items are
// claimed dynamically, so callers must write results into per-index slots
// for the outcome to be independent of scheduling.
void ParallelFor(size_t n, int num_threads,
                 const std::function<void(size_t)>& fn);

// Worker count from GSEDIT_THREADS, falling back to the hardware
// concurrency. Always >= 1.
int WorkerCountFromEnv();

}  // namespace gsedit

#endif  // GSEDIT_PARALLEL_H_
