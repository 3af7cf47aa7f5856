//
// Copyright 2026 The curvmix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef CURVMIX_PARALLEL_H_
#define CURVMIX_PARALLEL_H_

#include <cstddef>
#include <functional>
#include <span>

namespace curvmix {

// Thread count from CURVMIX_THREADS, or the hardware concurrency.
int DefaultThreads();

// Runs body(i) for i in [0, n) across `threads` workers with a static
// contiguous partition. Work items must write to disjoint outputs; callers
// reduce afterwards in index order, which keeps results independent of the
// thread count. threads <= 0 means DefaultThreads().
void ParallelFor(std::size_t n, int threads,
                 const std::function<void(std::size_t)>& body);

// Pairwise (cascade) summation in a fixed order.
double PairwiseSum(std::span<const double> values);

}  // namespace curvmix

#endif  // CURVMIX_PARALLEL_H_
