// Copyright 2026 The anonbench Authors.
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

#pragma once

#include <cstddef>
#include <functional>

namespace anonbench {

/// Runs `fn(i)` for i in [0, n) on up to `workers` threads. If any call
/// throws, remaining work is skipped and a BatchError naming the lowest
/// failing index observed is thrown.
void parallel_for_each_index(std::size_t n, std::size_t workers,
                             const std::function<void(std::size_t)>& fn);

/// std::thread::hardware_concurrency(), at least 1.
std::size_t hardware_workers();

}  // namespace anonbench
