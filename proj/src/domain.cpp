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

#include "alliance/domain.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace alliance {
namespace {

std::string join_violations(const std::vector<std::string>& v) {
  std::ostringstream os;
  os << v.size() << " validation error(s)";
  for (std::size_t i = 0; i < v.size() && i < 5; ++i) os << "; " << v[i];
  if (v.size() > 5) os << "; ...";
  return os.str();
}

void check_ratings(const ItemRatings& ratings, const WaiInventory& inv,
                   std::string_view which, std::vector<Violation>& out) {
  for (const auto& [id, r] : ratings) {
    if (!inv.contains(id)) {
      out.push_back({ViolationKind::kUnknownItem,
                     std::string(which) + " ratings: unregistered item '" +
                         id + "'"});
    }
    if (r < kMinRating || r > kMaxRating) {
      out.push_back({ViolationKind::kRatingOutOfRange,
                     std::string(which) + " ratings: rating out of range for '" +
                         id + "': " + std::to_string(r)});
    }
  }
  std::vector<std::string> missing;
  for (const auto& item : inv.items()) {
    if (!ratings.contains(item.item_id)) missing.push_back(item.item_id);
  }
  if (!missing.empty()) {
    std::string msg = std::string(which) + " ratings: incomplete inventory, " +
                      std::to_string(missing.size()) + " item(s) missing:";
    for (const auto& id : missing) msg += " " + id;
    out.push_back({ViolationKind::kIncompleteInventory, msg});
  }
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : Error(join_violations(violations)), violations_(std::move(violations)) {}

std::string_view to_string(Dimension d) {
  switch (d) {
    case Dimension::kGoal:
      return "Goal";
    case Dimension::kTask:
      return "Task";
    case Dimension::kBond:
      return "Bond";
  }
  return "?";
}

Dimension parse_dimension(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "goal") return Dimension::kGoal;
  if (lower == "task") return Dimension::kTask;
  if (lower == "bond") return Dimension::kBond;
  throw LookupError("unknown dimension '" + std::string(name) + "'");
}

std::string_view to_string(Speaker s) {
  return s == Speaker::kCounselor ? "Counselor" : "Client";
}

Speaker parse_speaker(std::string_view name) {
  if (name == "Counselor" || name == "counselor") return Speaker::kCounselor;
  if (name == "Client" || name == "client") return Speaker::kClient;
  throw LookupError("unknown speaker '" + std::string(name) + "'");
}

bool Session::annotated() const {
  if (utterances.empty()) return false;
  return std::all_of(utterances.begin(), utterances.end(),
                     [](const Utterance& u) {
                       return u.speaker == Speaker::kCounselor
                                  ? u.strategy.has_value()
                                  : u.reaction.has_value();
                     });
}

WaiInventory::WaiInventory(std::vector<WaiItem> items,
                           std::map<int, std::string> scale_anchors)
    : items_(std::move(items)), anchors_(std::move(scale_anchors)) {
  if (items_.size() != kInventorySize) {
    throw ConfigError("inventory must hold exactly 12 items, got " +
                      std::to_string(items_.size()));
  }
  std::array<int, 3> per_dim{};
  for (std::size_t i = 0; i < items_.size(); ++i) {
    const auto& item = items_[i];
    if (item.item_id.empty()) throw ConfigError("inventory item with empty id");
    if (item.client_text.empty()) {
      throw ConfigError("inventory item '" + item.item_id +
                        "' has empty client_text");
    }
    if (!by_id_.emplace(item.item_id, i).second) {
      throw ConfigError("duplicate inventory item id '" + item.item_id + "'");
    }
    ++per_dim[index_of(item.dimension)];
  }
  for (Dimension d : kDimensions) {
    if (per_dim[index_of(d)] != kItemsPerDimension) {
      throw ConfigError("dimension " + std::string(to_string(d)) + " has " +
                        std::to_string(per_dim[index_of(d)]) +
                        " items, expected 4");
    }
  }
  for (int r = kMinRating; r <= kMaxRating; ++r) {
    if (!anchors_.contains(r)) {
      throw ConfigError("scale anchor missing for rating " + std::to_string(r));
    }
  }
  if (anchors_.size() != 5) throw ConfigError("scale anchors must cover 1..5");
}

bool WaiInventory::contains(std::string_view item_id) const {
  return by_id_.find(item_id) != by_id_.end();
}

const WaiItem& WaiInventory::item(std::string_view item_id) const {
  return items_[position_of(item_id)];
}

Dimension WaiInventory::dimension_of(std::string_view item_id) const {
  return item(item_id).dimension;
}

std::size_t WaiInventory::position_of(std::string_view item_id) const {
  auto it = by_id_.find(item_id);
  if (it == by_id_.end()) {
    throw LookupError("unknown item id '" + std::string(item_id) + "'");
  }
  return it->second;
}

std::vector<std::string> WaiInventory::item_ids(Dimension d) const {
  std::vector<std::string> out;
  for (const auto& item : items_) {
    if (item.dimension == d) out.push_back(item.item_id);
  }
  return out;
}

const WaiInventory& placeholder_inventory() {
  static const WaiInventory inv(
      {
          {"goal_1", Dimension::kGoal, "我和咨询师对这次咨询要达到的目标看法一致。"},
          {"goal_2", Dimension::kGoal, "我们一起商定了我想在哪些方面做出改变。"},
          {"goal_3", Dimension::kGoal, "我清楚咨询师希望我通过咨询获得怎样的变化。"},
          {"goal_4", Dimension::kGoal, "我和咨询师共同确定了咨询的重点。"},
          {"task_1", Dimension::kTask, "咨询中的讨论让我能从另一个角度看待自己的处境。"},
          {"task_2", Dimension::kTask, "我认同咨询师提出的应对办法。"},
          {"task_3", Dimension::kTask, "咨询中做的事情与我的需要是相符的。"},
          {"task_4", Dimension::kTask, "我明白咨询中的活动怎样帮助我实现改变。"},
          {"bond_1", Dimension::kBond, "我觉得咨询师在意我这个人。"},
          {"bond_2", Dimension::kBond, "我相信咨询师能体会我的处境。"},
          {"bond_3", Dimension::kBond, "我觉得咨询师尊重我。"},
          {"bond_4", Dimension::kBond, "我和咨询师之间彼此信任。"},
      },
      {{1, "Seldom"},
       {2, "Sometimes"},
       {3, "Fairly Often"},
       {4, "Very Often"},
       {5, "Always"}});
  return inv;
}

DimensionScore DimensionScore::from_item_sum(int sum) {
  if (sum < kItemsPerDimension * kMinRating ||
      sum > kItemsPerDimension * kMaxRating) {
    throw Error("dimension item sum out of range: " + std::to_string(sum));
  }
  return DimensionScore(sum);
}

DimensionScores dimension_scores(const ItemRatings& ratings,
                                 const WaiInventory& inv) {
  if (ratings.size() != kInventorySize) {
    throw CardinalityError("expected 12 item ratings, got " +
                           std::to_string(ratings.size()));
  }
  std::array<int, 3> sums{};
  std::array<int, 3> counts{};
  for (const auto& [id, r] : ratings) {
    if (!inv.contains(id)) {
      throw CardinalityError("rating for unregistered item '" + id + "'");
    }
    if (r < kMinRating || r > kMaxRating) {
      throw Error("rating out of range for '" + id + "': " + std::to_string(r));
    }
    auto d = index_of(inv.dimension_of(id));
    sums[d] += r;
    ++counts[d];
  }
  DimensionScores out;
  for (Dimension d : kDimensions) {
    if (counts[index_of(d)] != kItemsPerDimension) {
      throw CardinalityError("incomplete item set for " +
                             std::string(to_string(d)));
    }
    out[index_of(d)] = DimensionScore::from_item_sum(sums[index_of(d)]);
  }
  return out;
}

std::vector<Violation> validate_session(const Session& s,
                                        const WaiInventory& inv) {
  std::vector<Violation> out;
  if (s.session_id.empty()) {
    out.push_back({ViolationKind::kEmptyId, "session_id is empty"});
  }
  if (s.client_id.empty()) {
    out.push_back({ViolationKind::kEmptyId, "client_id is empty"});
  }
  if (s.counselor_id.empty()) {
    out.push_back({ViolationKind::kEmptyId, "counselor_id is empty"});
  }
  if (s.utterances.size() < 2) {
    out.push_back({ViolationKind::kTooFewUtterances,
                   "session has " + std::to_string(s.utterances.size()) +
                       " utterance(s), need at least 2"});
  }
  bool has_counselor = false;
  bool has_client = false;
  for (std::size_t i = 0; i < s.utterances.size(); ++i) {
    const auto& u = s.utterances[i];
    const std::string where = "utterance " + std::to_string(i);
    (u.speaker == Speaker::kCounselor ? has_counselor : has_client) = true;
    if (u.index != static_cast<int>(i)) {
      out.push_back({ViolationKind::kIndexOrder,
                     where + ": index " + std::to_string(u.index) +
                         " breaks contiguous order"});
    }
    if (u.text.empty()) {
      out.push_back({ViolationKind::kEmptyText, where + ": empty text"});
    }
    if (u.speaker == Speaker::kClient && u.strategy) {
      out.push_back({ViolationKind::kMisplacedLabel,
                     where + ": strategy label on a client turn"});
    }
    if (u.speaker == Speaker::kCounselor && u.reaction) {
      out.push_back({ViolationKind::kMisplacedLabel,
                     where + ": reaction label on a counselor turn"});
    }
    if ((u.strategy && u.strategy->empty()) ||
        (u.reaction && u.reaction->empty())) {
      out.push_back({ViolationKind::kEmptyLabel, where + ": empty label"});
    }
  }
  if (!s.utterances.empty() && !(has_counselor && has_client)) {
    out.push_back({ViolationKind::kMissingSpeakerRole,
                   "session lacks a counselor or client turn"});
  }
  if (s.client_item_ratings) check_ratings(*s.client_item_ratings, inv, "client", out);
  if (s.counselor_item_ratings) {
    check_ratings(*s.counselor_item_ratings, inv, "counselor", out);
  }
  return out;
}

}  // namespace alliance
