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

#include "alliance/http_transport.hpp"

#include "alliance/errors.hpp"
#include "httplib.h"

namespace alliance {
namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("endpoint URL must start with http:// or https://: " + url);
  }
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw ConfigError("unsupported URL scheme '" + scheme + "'");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

httplib::Client make_client(const SplitUrl& u,
                            std::chrono::milliseconds timeout) {
  httplib::Client cli(u.origin);
  cli.set_connection_timeout(timeout);
  cli.set_read_timeout(timeout);
  cli.set_write_timeout(timeout);
  return cli;
}

}  // namespace

std::string join_url(const std::string& base, const std::string& path) {
  std::string b = base;
  while (!b.empty() && b.back() == '/') b.pop_back();
  std::string p = path;
  if (p.empty() || p.front() != '/') p.insert(p.begin(), '/');
  return b + p;
}

HttpResponse http_post_json(const std::string& url, const std::string& body,
                            const HttpHeaders& headers,
                            std::chrono::milliseconds timeout) {
  const SplitUrl u = split_url(url);
  auto cli = make_client(u, timeout);
  httplib::Headers h;
  for (const auto& [k, v] : headers) h.emplace(k, v);
  auto res = cli.Post(u.path, h, body, "application/json");
  if (!res) {
    throw TransportError("POST " + url + " failed: " + httplib::to_string(res.error()),
                         /*transient=*/true);
  }
  return {res->status, res->body};
}

HttpResponse http_get(const std::string& url, std::chrono::milliseconds timeout) {
  const SplitUrl u = split_url(url);
  auto cli = make_client(u, timeout);
  auto res = cli.Get(u.path);
  if (!res) {
    throw TransportError("GET " + url + " failed: " + httplib::to_string(res.error()),
                         /*transient=*/true);
  }
  return {res->status, res->body};
}

}  // namespace alliance
