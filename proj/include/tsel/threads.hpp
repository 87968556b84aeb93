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

#ifndef TSEL_THREADS_HPP_
#define TSEL_THREADS_HPP_

#include <cstddef>
#include <functional>

namespace tsel {

// Worker count used when a caller passes 0: $TSEL_THREADS if set to a
// positive integer, otherwise std::thread::hardware_concurrency().
unsigned default_threads();

// Splits [0, n) into at most `threads` contiguous chunks and runs
// fn(begin, end, chunk) for each, chunk ids ascending with position.
// Runs inline when one chunk suffices. Exceptions from workers are
// rethrown on the calling thread (first chunk wins).
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t, std::size_t, unsigned)>& fn);

// Number of chunks parallel_for will use for (n, threads).
unsigned chunk_count(std::size_t n, unsigned threads);

}  // namespace tsel

#endif  // TSEL_THREADS_HPP_
