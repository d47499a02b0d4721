// Copyright 2026 The nerport Authors
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

#ifndef NERPORT_UTF8_H_
#define NERPORT_UTF8_H_

#include <string>
#include <string_view>

namespace nerport {

// Decodes UTF-8 into Unicode scalar values. Throws std::invalid_argument on
// malformed input (overlong forms, surrogates, truncated sequences).
std::u32string DecodeUtf8(std::string_view bytes);

std::string EncodeUtf8(std::u32string_view text);
void AppendUtf8(char32_t c, std::string* out);

}  // namespace nerport

#endif  // NERPORT_UTF8_H_
