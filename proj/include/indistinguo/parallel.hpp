/**
 * Copyright 2026 The Indistinguo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace indistinguo {

/// Worker count: INDISTINGUO_THREADS when set to a positive integer,
/// otherwise the hardware concurrency (at least 1).
int thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` workers (0 means
/// thread_count()). Indices are split into contiguous blocks; each index is
/// visited exactly once, so results written per index do not depend on the
/// split. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  int threads = 0);

/// Counter-based seed derivation (splitmix64 finalizer over master + index).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

} // namespace indistinguo
