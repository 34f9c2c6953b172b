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


#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <random>

#include "alliance/interaction_regression.hpp"
#include "alliance/student_t.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"

using namespace alliance;

namespace {

double boost_two_sided(double t, double dof) {
  boost::math::students_t dist(dof);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

struct RandomSystem {
  DesignMatrix x;
  std::vector<std::vector<double>> rows;
  std::vector<double> y;
};

RandomSystem random_system(std::mt19937_64& rng, std::size_t n, std::size_t p) {
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<std::string> names = {"(Intercept)"};
  for (std::size_t j = 1; j < p; ++j) names.push_back("x" + std::to_string(j));
  RandomSystem s{DesignMatrix(names, 0), {}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row = {1.0};
    double y = 0.5;
    for (std::size_t j = 1; j < p; ++j) {
      row.push_back(z(rng));
      y += static_cast<double>(j) * 0.3 * row.back();
    }
    y += z(rng);
    s.x.add_row(row);
    s.rows.push_back(row);
    s.y.push_back(y);
  }
  return s;
}

Utterance counselor(int i, const char* strategy) {
  return {i, Speaker::kCounselor, "咨询师发言", std::string(strategy), {}};
}

Utterance client(int i, const char* reaction) {
  return {i, Speaker::kClient, "来访者发言", {}, std::string(reaction)};
}

}  // namespace

TEST_SUITE("regression") {

TEST_CASE("exact linear data is recovered") {
  DesignMatrix x({"(Intercept)", "x"}, 0);
  std::vector<double> y;
  for (int i = 0; i < 10; ++i) {
    x.add_row({1.0, static_cast<double>(i)});
    y.push_back(2.0 * i + 1.0);
  }
  const auto fit = ols_fit(x, y);
  CHECK(fit.coefficients[0].estimate == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.coefficients[1].estimate == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.rss < 1e-16);
  CHECK(*fit.r_squared == doctest::Approx(1.0));
  CHECK(fit.coefficients[1].name == "x");
}

TEST_CASE("random systems match the normal equations") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 20; ++t) {
    const auto s = random_system(rng, 50, 4);
    const auto fit = ols_fit(s.x, s.y);
    const auto beta = oracle::normal_equations(s.rows, s.y);
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(std::abs(fit.coefficients[j].estimate - beta[j]) < 1e-8);
    }
    CHECK(fit.n == 50);
    CHECK(fit.p == 4);
  }
}

TEST_CASE("standard errors and p-values follow the textbook formulas") {
  std::mt19937_64 rng(4);
  const auto s = random_system(rng, 40, 3);
  const auto fit = ols_fit(s.x, s.y);
  const auto beta = oracle::normal_equations(s.rows, s.y);
  double rss = 0;
  for (std::size_t i = 0; i < s.rows.size(); ++i) {
    double fitted = 0;
    for (std::size_t k = 0; k < 3; ++k) fitted += s.rows[i][k] * beta[k];
    rss += (s.y[i] - fitted) * (s.y[i] - fitted);
  }
  CHECK(fit.rss == doctest::Approx(rss).epsilon(1e-10));
  CHECK(fit.residual_variance == doctest::Approx(rss / 37).epsilon(1e-10));
  for (const auto& c : fit.coefficients) {
    CHECK(c.t == doctest::Approx(c.estimate / c.std_error));
    CHECK(std::abs(c.p - boost_two_sided(c.t, 37)) < 1e-6);
  }
}

TEST_CASE("the t distribution matches an independent implementation") {
  for (double dof : {1.0, 2.0, 3.0, 5.0, 10.0, 30.0, 46.0, 120.0, 1000.0}) {
    for (double t : {0.0, 0.1, 0.5, 1.0, 1.96, 2.5, 3.3, 5.0, 10.0, 40.0}) {
      CAPTURE(dof);
      CAPTURE(t);
      CHECK(std::abs(student_t_two_sided_p(t, dof) - boost_two_sided(t, dof)) < 1e-10);
      CHECK(std::abs(student_t_two_sided_p(-t, dof) - boost_two_sided(t, dof)) < 1e-10);
      boost::math::students_t dist(dof);
      CHECK(std::abs(student_t_cdf(t, dof) - boost::math::cdf(dist, t)) < 1e-10);
      CHECK(std::abs(student_t_cdf(-t, dof) - boost::math::cdf(dist, -t)) < 1e-10);
    }
  }
  CHECK(student_t_two_sided_p(INFINITY, 5) == 0.0);
  CHECK(regularized_incomplete_beta(2, 3, 0) == 0.0);
  CHECK(regularized_incomplete_beta(2, 3, 1) == 1.0);
  CHECK_THROWS_AS(regularized_incomplete_beta(-1, 3, 0.5), ConfigError);
  CHECK_THROWS_AS(regularized_incomplete_beta(1, 3, 1.5), ConfigError);
}

TEST_CASE("significance stars use strict thresholds") {
  CHECK(significance_stars(0.0005) == "***");
  CHECK(significance_stars(0.0009) == "***");
  CHECK(significance_stars(0.001) == "**");
  CHECK(significance_stars(0.009) == "**");
  CHECK(significance_stars(0.01) == "*");
  CHECK(significance_stars(0.03) == "*");
  CHECK(significance_stars(0.049) == "*");
  CHECK(significance_stars(0.05) == "");
  CHECK(significance_stars(0.051) == "");
}

TEST_CASE("singular and underdetermined designs are rejected") {
  DesignMatrix x({"(Intercept)", "a", "a_copy"}, 0);
  std::vector<double> y;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z;
  for (int i = 0; i < 20; ++i) {
    const double v = z(rng);
    x.add_row({1.0, v, v});
    y.push_back(z(rng));
  }
  CHECK_THROWS_AS(ols_fit(x, y), NumericalError);

  DesignMatrix small({"(Intercept)", "a"}, 0);
  small.add_row({1.0, 0.0});
  small.add_row({1.0, 1.0});
  CHECK_THROWS_AS(ols_fit(small, {1.0, 2.0}), NumericalError);
  CHECK_THROWS_AS(ols_fit(small, {1.0}), CardinalityError);
  CHECK_THROWS_AS(small.add_row({1.0}), CardinalityError);
}

TEST_CASE("residuals are orthogonal to the design") {
  std::mt19937_64 rng(8);
  const auto s = random_system(rng, 60, 5);
  const auto fit = ols_fit(s.x, s.y);
  for (std::size_t j = 0; j < 5; ++j) {
    double dot = 0;
    for (std::size_t i = 0; i < 60; ++i) {
      double fitted = 0;
      for (std::size_t k = 0; k < 5; ++k) fitted += s.rows[i][k] * fit.coefficients[k].estimate;
      dot += s.rows[i][j] * (s.y[i] - fitted);
    }
    CHECK(std::abs(dot) <= 1e-8);
  }
}

TEST_CASE("R squared is invariant under affine rescaling of a predictor") {
  std::mt19937_64 rng(9);
  const auto s = random_system(rng, 45, 4);
  const auto base = ols_fit(s.x, s.y);
  DesignMatrix scaled = s.x;
  for (std::size_t i = 0; i < scaled.rows(); ++i) scaled.at(i, 2) = 7.5 * scaled.at(i, 2) - 3.0;
  const auto refit = ols_fit(scaled, s.y);
  CHECK(std::abs(*base.r_squared - *refit.r_squared) < 1e-12);
  CHECK(*base.r_squared >= 0.0);
  CHECK(*base.r_squared <= 1.0);
}

TEST_CASE("pattern features count adjacent counselor-client pairs") {
  Session s = testing::tiny_session("s1", "c1");
  s.utterances = {counselor(0, "Supporting"), client(1, "Positive"), counselor(2, "Challenging")};
  CHECK(s.annotated());
  const auto counts = count_patterns(s);
  REQUIRE(counts.size() == 1);
  CHECK(counts.at({"Supporting", "Positive"}) == 1);

  Session plain = testing::tiny_session("s2", "c1");
  const auto design = build_design({s, plain}, observed_patterns({s, plain}));
  REQUIRE(design.x.rows() == 1);
  CHECK(design.x.columns() == std::vector<std::string>{"(Intercept)", "Supporting - Positive"});
  CHECK(design.x.at(0, 0) == 1.0);
  CHECK(design.x.at(0, 1) == 0.5);
  CHECK(design.warnings.size() == 1);
  CHECK(design.session_ids == std::vector<std::string>{"s1"});

  const auto raw = build_design({s}, observed_patterns({s}), FeatureMode::kRawCount);
  CHECK(raw.x.at(0, 1) == 1.0);

  const auto intercept_only = build_design({s}, {});
  CHECK(intercept_only.x.cols() == 1);
  CHECK_THROWS_AS(build_design({plain}, {}), MissingDataError);
}

TEST_CASE("interaction reports fit all three dimensions") {
  SynthConfig cfg;
  cfg.annotate_fraction = 1.0;
  cfg.n_clients = 30;
  const auto corpus = synth_corpus(cfg, placeholder_inventory());
  const auto report = interaction_report(corpus.sessions, placeholder_inventory());
  CHECK(report.session_ids.size() == corpus.sessions.size());
  for (const auto& fit : report.fits) {
    CHECK(fit.coefficients.front().name == "(Intercept)");
    for (const auto& c : fit.coefficients) {
      CHECK(c.p >= 0.0);
      CHECK(c.p <= 1.0);
    }
  }
  const auto table = render_interaction_table(report);
  CHECK(table.find("(Intercept)") != std::string::npos);
  CHECK(table.find("Goal") != std::string::npos);
  const auto j = interaction_report_to_json(report);
  CHECK(j.contains("fits"));

  const auto empty_vocab =
      interaction_report(corpus.sessions, placeholder_inventory(), std::vector<Pattern>{});
  for (const auto& fit : empty_vocab.fits) CHECK(fit.coefficients.size() == 1);
}

}  // TEST_SUITE
