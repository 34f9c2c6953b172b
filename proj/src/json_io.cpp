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

#include "alliance/json_io.hpp"

#include <fstream>
#include <sstream>

#include "alliance/errors.hpp"

namespace alliance {

std::string dump_line(const Json& j) {
  return j.dump(-1, ' ', false, Json::error_handler_t::replace);
}

std::string dump_pretty(const Json& j) {
  return j.dump(2, ' ', false, Json::error_handler_t::replace);
}

void for_each_jsonl(std::istream& in,
                    const std::function<void(const Json&, std::size_t)>& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) {
      throw ParseError("line 1: UTF-8 byte-order mark is not allowed", 1);
    }
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    Json j = Json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) {
      throw ParseError("line " + std::to_string(line_no) + ": malformed JSON",
                       line_no);
    }
    if (!j.is_object()) {
      throw ParseError(
          "line " + std::to_string(line_no) + ": expected a JSON object",
          line_no);
    }
    fn(j, line_no);
  }
}

Json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw ParseError(path.string() + ": malformed JSON");
  }
  return j;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FileError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw FileError("write failed for '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const Json& require_field(const Json& obj, std::string_view key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError("missing field \"" + std::string(key) + "\"");
  }
  return *it;
}

std::string require_string(const Json& obj, std::string_view key) {
  const Json& v = require_field(obj, key);
  if (!v.is_string()) {
    throw ParseError("field \"" + std::string(key) + "\" must be a string");
  }
  return v.get<std::string>();
}

long long require_int(const Json& obj, std::string_view key) {
  const Json& v = require_field(obj, key);
  if (!v.is_number_integer()) {
    throw ParseError("field \"" + std::string(key) + "\" must be an integer");
  }
  return v.get<long long>();
}

double require_number(const Json& obj, std::string_view key) {
  const Json& v = require_field(obj, key);
  if (!v.is_number()) {
    throw ParseError("field \"" + std::string(key) + "\" must be a number");
  }
  return v.get<double>();
}

}  // namespace alliance
