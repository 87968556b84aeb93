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

#ifndef TSEL_UTF8_HPP_
#define TSEL_UTF8_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tsel::utf8 {

// True if `text` is well-formed UTF-8 (no overlongs, no surrogates,
// nothing above U+10FFFF).
bool is_valid(std::string_view text);

// Splits well-formed UTF-8 into one string per code point.
std::vector<std::string> code_points(std::string_view text);

}  // namespace tsel::utf8

#endif  // TSEL_UTF8_HPP_
