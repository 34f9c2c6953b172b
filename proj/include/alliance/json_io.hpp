// Copyright 2026 The Alliance Eval Authors.
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

#ifndef ALLIANCE_JSON_IO_HPP_
#define ALLIANCE_JSON_IO_HPP_

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

#include "json.hpp"

namespace alliance {

// Insertion-ordered so emitted files keep schema field order.
using Json = nlohmann::ordered_json;

// Compact single-line dump. Invalid UTF-8 is replaced rather than thrown.
std::string dump_line(const Json& j);
std::string dump_pretty(const Json& j);

// Calls `fn(json, line_number)` for every non-blank line. Throws ParseError
// naming the line on malformed JSON or a UTF-8 byte-order mark.
void for_each_jsonl(std::istream& in,
                    const std::function<void(const Json&, std::size_t)>& fn);

Json read_json_file(const std::filesystem::path& path);
// Writes text to `path`, throwing FileError on failure.
void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

// Typed field access with ParseError on absence or type mismatch.
const Json& require_field(const Json& obj, std::string_view key);
std::string require_string(const Json& obj, std::string_view key);
long long require_int(const Json& obj, std::string_view key);
double require_number(const Json& obj, std::string_view key);

}  // namespace alliance

#endif  // ALLIANCE_JSON_IO_HPP_
