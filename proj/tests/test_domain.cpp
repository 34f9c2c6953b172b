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


#include <algorithm>
#include <set>

#include "alliance/domain.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace alliance;

TEST_SUITE("domain") {

TEST_CASE("a fully rated session with both roles is valid") {
  const auto& inv = placeholder_inventory();
  Session s = testing::tiny_session("s1", "c1");
  s.counselor_item_ratings = testing::uniform_ratings(3);
  CHECK(validate_session(s, inv).empty());
}

TEST_CASE("a rating of 6 gives exactly one out-of-range violation") {
  const auto& inv = placeholder_inventory();
  Session s = testing::tiny_session("s1", "c1");
  (*s.client_item_ratings)["task_2"] = 6;
  const auto v = validate_session(s, inv);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == ViolationKind::kRatingOutOfRange);
  CHECK(v[0].message.find("task_2") != std::string::npos);
}

TEST_CASE("eleven rated items give exactly one incomplete-inventory violation") {
  const auto& inv = placeholder_inventory();
  Session s = testing::tiny_session("s1", "c1");
  s.client_item_ratings->erase("bond_4");
  const auto v = validate_session(s, inv);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == ViolationKind::kIncompleteInventory);
  CHECK(v[0].message.find("bond_4") != std::string::npos);
}

TEST_CASE("structural violations are reported") {
  const auto& inv = placeholder_inventory();
  Session s = testing::tiny_session("s1", "c1");
  s.utterances[1].speaker = Speaker::kCounselor;
  s.utterances[1].index = 5;
  s.utterances[0].reaction = "Positive";
  s.utterances[0].text.clear();
  const auto v = validate_session(s, inv);
  std::set<ViolationKind> kinds;
  for (const auto& x : v) kinds.insert(x.kind);
  CHECK(kinds.count(ViolationKind::kIndexOrder) == 1);
  CHECK(kinds.count(ViolationKind::kEmptyText) == 1);
  CHECK(kinds.count(ViolationKind::kMisplacedLabel) == 1);
  CHECK(kinds.count(ViolationKind::kMissingSpeakerRole) == 1);

  Session one = testing::tiny_session("s2", "c1");
  one.utterances.pop_back();
  const auto v1 = validate_session(one, inv);
  CHECK(std::any_of(v1.begin(), v1.end(), [](const Violation& x) {
    return x.kind == ViolationKind::kTooFewUtterances;
  }));

  Session unknown = testing::tiny_session("s3", "c1");
  (*unknown.client_item_ratings)["goal_9"] = 3;
  const auto v2 = validate_session(unknown, inv);
  REQUIRE(v2.size() == 1);
  CHECK(v2[0].kind == ViolationKind::kUnknownItem);
}

TEST_CASE("validation is idempotent") {
  const auto& inv = placeholder_inventory();
  Session s = testing::tiny_session("", "c1");
  (*s.client_item_ratings)["goal_1"] = 0;
  s.client_item_ratings->erase("goal_2");
  CHECK(validate_session(s, inv) == validate_session(s, inv));
}

TEST_CASE("dimension_of looks up registered items and rejects others") {
  const auto& inv = placeholder_inventory();
  CHECK(dimension_of("goal_1", inv) == Dimension::kGoal);
  CHECK(dimension_of("bond_3", inv) == Dimension::kBond);
  CHECK(dimension_of("task_4", inv) == Dimension::kTask);
  CHECK_THROWS_AS(dimension_of("goal_13", inv), LookupError);
}

TEST_CASE("every inventory has twelve items, four per dimension") {
  const auto& inv = placeholder_inventory();
  CHECK(inv.items().size() == 12);
  for (Dimension d : kDimensions) CHECK(inv.item_ids(d).size() == 4);
  for (const auto& item : inv.items()) {
    CHECK(inv.dimension_of(item.item_id) == item.dimension);
    CHECK_FALSE(item.client_text.empty());
  }
  CHECK(inv.scale_anchors().at(1) == "Seldom");
  CHECK(inv.scale_anchors().at(5) == "Always");
}

TEST_CASE("malformed inventories are rejected at construction") {
  auto items = placeholder_inventory().items();
  const auto anchors = placeholder_inventory().scale_anchors();
  SUBCASE("eleven items") {
    items.pop_back();
    CHECK_THROWS_AS(WaiInventory(items, anchors), ConfigError);
  }
  SUBCASE("five goal items") {
    items.back().dimension = Dimension::kGoal;
    CHECK_THROWS_AS(WaiInventory(items, anchors), ConfigError);
  }
  SUBCASE("duplicate id") {
    items[1].item_id = items[0].item_id;
    CHECK_THROWS_AS(WaiInventory(items, anchors), ConfigError);
  }
  SUBCASE("empty item text") {
    items[0].client_text.clear();
    CHECK_THROWS_AS(WaiInventory(items, anchors), ConfigError);
  }
}

TEST_CASE("dimension scores are exact quarter steps") {
  const auto& inv = placeholder_inventory();
  ItemRatings r = testing::uniform_ratings(4);
  r["goal_1"] = 5;
  r["goal_2"] = 3;
  r["goal_3"] = 2;
  r["task_1"] = 1;
  const auto d = dimension_scores(r, inv);
  CHECK(d[index_of(Dimension::kGoal)].quarters() == 14);
  CHECK(d[index_of(Dimension::kGoal)].value() == 3.5);
  CHECK(d[index_of(Dimension::kTask)].value() == 3.25);
  CHECK(d[index_of(Dimension::kBond)].value() == 4.0);

  for (int sum = 4; sum <= 20; ++sum) {
    CHECK(DimensionScore::from_item_sum(sum).value() * 4 == sum);
  }
  CHECK_THROWS(DimensionScore::from_item_sum(3));
  CHECK_THROWS(DimensionScore::from_item_sum(21));

  r.erase("bond_1");
  CHECK_THROWS_AS(dimension_scores(r, inv), CardinalityError);
}

TEST_CASE("names round trip") {
  for (Dimension d : kDimensions) CHECK(parse_dimension(to_string(d)) == d);
  CHECK(parse_dimension("bond") == Dimension::kBond);
  CHECK_THROWS_AS(parse_dimension("Trust"), LookupError);
  CHECK(parse_speaker("Client") == Speaker::kClient);
  CHECK_THROWS_AS(parse_speaker("Therapist"), LookupError);
}

}  // TEST_SUITE
