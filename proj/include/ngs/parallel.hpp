/*
 * Copyright 2026 The ngs Authors
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

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace ngs {

/// Splits [0, count) into `threads` contiguous chunks, evaluates
/// fn(begin, end) for each and folds the partial results in chunk order, so
/// the result depends on the thread count but not on scheduling.
template <typename T, typename Fn, typename Combine>
T parallel_reduce(std::size_t count, int threads, T init, Fn fn, Combine combine) {
  const std::size_t chunks =
      std::max<std::size_t>(1, std::min<std::size_t>(threads > 0 ? threads : 1, count));
  if (chunks == 1) return combine(std::move(init), fn(std::size_t{0}, count));
  std::vector<T> partial(chunks);
  std::vector<std::exception_ptr> errors(chunks);
  std::vector<std::thread> workers;
  workers.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t begin = count * c / chunks;
    const std::size_t end = count * (c + 1) / chunks;
    workers.emplace_back([&, c, begin, end] {
      try {
        partial[c] = fn(begin, end);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (std::thread& w : workers) w.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  T result = std::move(init);
  for (T& p : partial) result = combine(std::move(result), std::move(p));
  return result;
}

}  // namespace ngs
