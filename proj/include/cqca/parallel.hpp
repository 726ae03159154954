// Copyright 2026 The cqca Authors
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

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace cqca {

/// Worker cap: hardware concurrency, lowered by CQCA_THREADS if set.
inline unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CQCA_THREADS")) {
    try {
      long cap = std::stol(env);
      if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    } catch (const std::exception&) {
      // unparsable value: keep the default
    }
  }
  return n;
}

/// Calls body(lo, hi) over disjoint chunks covering [begin, end). Runs
/// inline when the range is shorter than 2 * min_chunk or one worker is
/// available. body must only write to its own chunk.
template <typename Body>
void parallel_for(std::size_t begin, std::size_t end, std::size_t min_chunk, Body&& body) {
  const std::size_t len = end > begin ? end - begin : 0;
  const std::size_t workers =
      std::min<std::size_t>(worker_count(), min_chunk == 0 ? len : len / min_chunk);
  if (workers <= 1) {
    if (len > 0) body(begin, end);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  const std::size_t step = (len + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t lo = begin + w * step;
    const std::size_t hi = std::min(end, lo + step);
    if (lo < hi) pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  body(begin, std::min(end, begin + step));
}

}  // namespace cqca
