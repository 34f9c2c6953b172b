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

#ifndef ALLIANCE_HTTP_TRANSPORT_HPP_
#define ALLIANCE_HTTP_TRANSPORT_HPP_

#include <chrono>
#include <string>
#include <utility>
#include <vector>

namespace alliance {

struct HttpResponse {
  int status = 0;
  std::string body;
};

using HttpHeaders = std::vector<std::pair<std::string, std::string>>;

// POSTs a JSON body to an absolute http(s) URL. Connection-level failures
// raise a transient TransportError; any HTTP status is returned as is.
HttpResponse http_post_json(const std::string& url, const std::string& body,
                            const HttpHeaders& headers,
                            std::chrono::milliseconds timeout);

HttpResponse http_get(const std::string& url, std::chrono::milliseconds timeout);

// "http://host:8000/v1" + "/chat/completions", collapsing duplicate slashes.
std::string join_url(const std::string& base, const std::string& path);

}  // namespace alliance

#endif  // ALLIANCE_HTTP_TRANSPORT_HPP_
