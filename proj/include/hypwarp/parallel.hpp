// Copyright 2026 The hypwarp Authors.
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
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace hypwarp {

/// Worker count: HYPWARP_THREADS if set and positive, else 1.
inline unsigned default_threads() {
  if (const char* env = std::getenv("HYPWARP_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(std::min<long>(v, 256));
    } catch (const std::exception&) {
    }
  }
  return 1;
}

/// Evaluates fn(0), fn(1), ... in waves of `threads` and returns the result
/// with the smallest index that is engaged. Same answer for any thread count.
template <typename T, typename Fn>
std::optional<T> first_in_order(std::size_t count, unsigned threads, Fn&& fn) {
  threads = std::max(1u, threads);
  for (std::size_t begin = 0; begin < count; begin += threads) {
    const std::size_t end = std::min(count, begin + threads);
    std::vector<std::optional<T>> out(end - begin);
    if (threads == 1) {
      out[0] = fn(begin);
    } else {
      std::vector<std::exception_ptr> errs(end - begin);
      std::vector<std::thread> pool;
      for (std::size_t i = begin; i < end; ++i) {
        pool.emplace_back([&, i] {
          try {
            out[i - begin] = fn(i);
          } catch (...) {
            errs[i - begin] = std::current_exception();
          }
        });
      }
      for (auto& t : pool) t.join();
      for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    }
    for (auto& o : out)
      if (o) return o;
  }
  return std::nullopt;
}

}  // namespace hypwarp
