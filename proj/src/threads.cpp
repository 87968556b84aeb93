// Copyright 2026 The tsel Authors.
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

#include "tsel/threads.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace tsel {

unsigned default_threads() {
  if (const char* env = std::getenv("TSEL_THREADS")) {
    try {
      int v = std::stoi(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

unsigned chunk_count(std::size_t n, unsigned threads) {
  if (threads == 0) threads = default_threads();
  // Below this many items per chunk, thread startup dominates.
  constexpr std::size_t kMinChunk = 1024;
  std::size_t by_size = std::max<std::size_t>(1, n / kMinChunk);
  return static_cast<unsigned>(std::min<std::size_t>(threads, by_size));
}

void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t, std::size_t, unsigned)>& fn) {
  unsigned chunks = chunk_count(n, threads);
  if (chunks <= 1) {
    fn(0, n, 0);
    return;
  }
  std::vector<std::exception_ptr> errors(chunks);
  {
    std::vector<std::jthread> workers;
    workers.reserve(chunks);
    for (unsigned c = 0; c < chunks; ++c) {
      std::size_t begin = n * c / chunks;
      std::size_t end = n * (c + 1) / chunks;
      workers.emplace_back([&, begin, end, c] {
        try {
          fn(begin, end, c);
        } catch (...) {
          errors[c] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace tsel
