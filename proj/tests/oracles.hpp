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

// Independent reference implementations used only by tests. Each takes a
// different route from the library code: one-pass long double sums instead
// of centred passes, pairwise rank counting instead of sorting, brute-force
// n-gram enumeration, memoised LCS recursion, and normal equations solved
// by Gauss-Jordan elimination.

#ifndef ALLIANCE_TESTS_ORACLES_HPP_
#define ALLIANCE_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace oracle {

inline std::optional<double> pearson(const std::vector<double>& x,
                                     const std::vector<double>& y) {
  const long double n = static_cast<long double>(x.size());
  long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const long double a = x[i], b = y[i];
    sx += a;
    sy += b;
    sxx += a * a;
    syy += b * b;
    sxy += a * b;
  }
  const long double vx = n * sxx - sx * sx;
  const long double vy = n * syy - sy * sy;
  bool const_x = std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; });
  bool const_y = std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; });
  if (const_x || const_y) return std::nullopt;
  return static_cast<double>((n * sxy - sx * sy) / std::sqrt(vx * vy));
}

// Rank of v[i] = 1 + #{j: v_j < v_i} + (#{j != i: v_j == v_i}) / 2.
inline std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0, equal = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] < v[i]) less += 1;
      if (j != i && v[j] == v[i]) equal += 1;
    }
    r[i] = 1.0 + less + equal / 2.0;
  }
  return r;
}

inline std::optional<double> spearman(const std::vector<double>& x,
                                      const std::vector<double>& y) {
  return pearson(ranks(x), ranks(y));
}

inline double mse(const std::vector<double>& x, const std::vector<double>& y) {
  long double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const long double d = static_cast<long double>(x[i]) - y[i];
    s += d * d;
  }
  return static_cast<double>(s / x.size());
}

using Tokens = std::vector<std::string>;

// Clipped n-gram matches by enumerating every candidate position and
// counting occurrences directly.
inline int ngram_matches(const Tokens& c, const Tokens& r, std::size_t n) {
  if (c.size() < n) return 0;
  auto occurrences = [n](const Tokens& seq, std::size_t start_in, const Tokens& src) {
    int count = 0;
    for (std::size_t j = 0; j + n <= seq.size(); ++j) {
      bool same = true;
      for (std::size_t k = 0; k < n && same; ++k) same = seq[j + k] == src[start_in + k];
      count += same;
    }
    return count;
  };
  int total = 0;
  for (std::size_t i = 0; i + n <= c.size(); ++i) {
    // Count each distinct n-gram once, at its first position.
    bool seen_before = false;
    for (std::size_t p = 0; p < i && !seen_before; ++p) {
      bool same = true;
      for (std::size_t k = 0; k < n && same; ++k) same = c[p + k] == c[i + k];
      seen_before = same;
    }
    if (seen_before) continue;
    total += std::min(occurrences(c, i, c), occurrences(r, i, c));
  }
  return total;
}

inline double bleu(const Tokens& c, const Tokens& r, int max_n = 4) {
  if (c.empty()) return 0.0;
  double log_p = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    const int m = ngram_matches(c, r, static_cast<std::size_t>(n));
    if (m == 0) return 0.0;
    const double total = static_cast<double>(c.size()) - n + 1;
    log_p += std::log(m / total);
  }
  const double bp = c.size() > r.size()
                        ? 1.0
                        : std::exp(1.0 - static_cast<double>(r.size()) / c.size());
  return bp * std::exp(log_p / max_n);
}

struct Prf {
  double p, r, f;
};

inline Prf prf(double overlap, std::size_t nc, std::size_t nr) {
  const double p = nc ? overlap / nc : 0.0;
  const double r = nr ? overlap / nr : 0.0;
  return {p, r, p + r > 0 ? 2 * p * r / (p + r) : 0.0};
}

inline Prf rouge1(const Tokens& c, const Tokens& r) {
  return prf(ngram_matches(c, r, 1), c.size(), r.size());
}

inline std::size_t lcs(const Tokens& a, const Tokens& b) {
  std::vector<std::vector<int>> memo(a.size() + 1, std::vector<int>(b.size() + 1, -1));
  std::function<int(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> int {
    if (i == a.size() || j == b.size()) return 0;
    int& m = memo[i][j];
    if (m >= 0) return m;
    if (a[i] == b[j]) return m = 1 + go(i + 1, j + 1);
    return m = std::max(go(i + 1, j), go(i, j + 1));
  };
  return static_cast<std::size_t>(go(0, 0));
}

inline Prf rougeL(const Tokens& c, const Tokens& r) {
  return prf(static_cast<double>(lcs(c, r)), c.size(), r.size());
}

// beta = (X^T X)^-1 X^T y by Gauss-Jordan on the normal equations, in
// long double. X is row-major n x p.
inline std::vector<double> normal_equations(const std::vector<std::vector<double>>& x,
                                            const std::vector<double>& y) {
  const std::size_t p = x[0].size();
  std::vector<std::vector<long double>> a(p, std::vector<long double>(p + 1, 0));
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      for (std::size_t k = 0; k < p; ++k) a[j][k] += static_cast<long double>(x[i][j]) * x[i][k];
      a[j][p] += static_cast<long double>(x[i][j]) * y[i];
    }
  }
  for (std::size_t c = 0; c < p; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < p; ++r) {
      if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
    }
    std::swap(a[c], a[piv]);
    for (std::size_t r = 0; r < p; ++r) {
      if (r == c) continue;
      const long double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k <= p; ++k) a[r][k] -= f * a[c][k];
    }
  }
  std::vector<double> beta(p);
  for (std::size_t j = 0; j < p; ++j) beta[j] = static_cast<double>(a[j][p] / a[j][j]);
  return beta;
}

}  // namespace oracle

#endif  // ALLIANCE_TESTS_ORACLES_HPP_
