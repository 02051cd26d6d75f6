// Copyright 2026 The Distillens Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DISTILLENS_PARALLEL_H_
#define DISTILLENS_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace distillens {

// Number of hardware threads, at least 1.
unsigned DefaultThreads();

// Calls fn(i) for every i in [0, n) using up to `threads` workers. Callers
// must write results to per-index slots; any reduction happens afterwards in
// index order so the outcome does not depend on `threads`. If several calls
// throw, the exception from the lowest index is rethrown.
void ParallelFor(std::size_t n, unsigned threads,
                 const std::function<void(std::size_t)> &fn);

}  // namespace distillens

#endif  // DISTILLENS_PARALLEL_H_
