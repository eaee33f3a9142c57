// Copyright 2026 The Post-Edit Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pe::text {

// All character offsets in this project count Unicode scalar values.
// Text is stored as UTF-8 and decoded to UTF-32 when offsets matter.

/// Decodes UTF-8. Throws DataError on malformed input.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);
void append_utf8(std::string& out, char32_t cp);

/// Number of scalar values in a UTF-8 string.
std::size_t length(std::string_view utf8);

bool is_space(char32_t c);
bool is_punct(char32_t c);
char32_t to_lower(char32_t c);
std::string to_lower(std::string_view utf8);

std::string_view trim(std::string_view s);

/// Splits on '\n' (a trailing '\r' is removed from each line). A final
/// newline does not produce an extra empty line.
std::vector<std::string_view> split_lines(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);

}  // namespace pe::text
