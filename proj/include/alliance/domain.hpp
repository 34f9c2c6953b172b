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

// Core value types: sessions, the 12-item alliance inventory, and the
// per-item verdicts produced by a model.

#ifndef ALLIANCE_DOMAIN_HPP_
#define ALLIANCE_DOMAIN_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "alliance/errors.hpp"

namespace alliance {

enum class Dimension { kGoal = 0, kTask = 1, kBond = 2 };

inline constexpr std::array<Dimension, 3> kDimensions = {
    Dimension::kGoal, Dimension::kTask, Dimension::kBond};
inline constexpr int kItemsPerDimension = 4;
inline constexpr int kInventorySize = 12;
inline constexpr int kMinRating = 1;
inline constexpr int kMaxRating = 5;

std::string_view to_string(Dimension d);
// Accepts "Goal"/"goal"; throws LookupError otherwise.
Dimension parse_dimension(std::string_view name);
inline std::size_t index_of(Dimension d) { return static_cast<std::size_t>(d); }

enum class Speaker { kCounselor, kClient };

std::string_view to_string(Speaker s);
Speaker parse_speaker(std::string_view name);

struct Utterance {
  int index = 0;
  Speaker speaker = Speaker::kCounselor;
  std::string text;
  std::optional<std::string> strategy;  // counselor turns only
  std::optional<std::string> reaction;  // client turns only

  bool operator==(const Utterance&) const = default;
};

// item_id -> integer rating in [1, 5].
using ItemRatings = std::map<std::string, int>;

struct Session {
  std::string session_id;
  std::string client_id;
  std::string counselor_id;
  std::vector<Utterance> utterances;
  std::optional<ItemRatings> client_item_ratings;
  std::optional<ItemRatings> counselor_item_ratings;

  bool operator==(const Session&) const = default;

  // True when every utterance carries its strategy/reaction label.
  bool annotated() const;
};

struct WaiItem {
  std::string item_id;
  Dimension dimension = Dimension::kGoal;
  std::string client_text;

  bool operator==(const WaiItem&) const = default;
};

// The 12-item registry. Construction enforces 4 items per dimension and
// unique ids, so every instance in circulation is well formed.
class WaiInventory {
 public:
  WaiInventory(std::vector<WaiItem> items,
               std::map<int, std::string> scale_anchors);

  const std::vector<WaiItem>& items() const { return items_; }
  const std::map<int, std::string>& scale_anchors() const { return anchors_; }

  bool contains(std::string_view item_id) const;
  const WaiItem& item(std::string_view item_id) const;
  Dimension dimension_of(std::string_view item_id) const;
  // Position of the item in inventory order.
  std::size_t position_of(std::string_view item_id) const;
  std::vector<std::string> item_ids(Dimension d) const;

 private:
  std::vector<WaiItem> items_;
  std::map<int, std::string> anchors_;
  std::map<std::string, std::size_t, std::less<>> by_id_;
};

// Free-function form of the registry lookup.
inline Dimension dimension_of(std::string_view item_id,
                              const WaiInventory& inv) {
  return inv.dimension_of(item_id);
}

// Paraphrased stand-in items; the licensed wording is supplied by the user
// through an inventory file.
const WaiInventory& placeholder_inventory();

// Mean of four integer item ratings, held exactly as a count of quarters.
class DimensionScore {
 public:
  DimensionScore() = default;
  // Sum of the four item ratings, 4..20.
  static DimensionScore from_item_sum(int sum);

  int quarters() const { return quarters_; }
  double value() const { return quarters_ / 4.0; }

  bool operator==(const DimensionScore&) const = default;
  auto operator<=>(const DimensionScore&) const = default;

 private:
  explicit DimensionScore(int quarters) : quarters_(quarters) {}
  int quarters_ = 4;
};

using DimensionScores = std::array<DimensionScore, 3>;

// Aggregates a complete 12-item rating map. Throws CardinalityError when
// items are missing or unregistered.
DimensionScores dimension_scores(const ItemRatings& ratings,
                                 const WaiInventory& inv);

struct DecodeParams {
  double temperature = 0.0;
  double nucleus = 1.0;

  bool operator==(const DecodeParams&) const = default;
};

struct PredictionRecord {
  std::string session_id;
  std::string item_id;
  int score = 0;
  std::string rationale;
  std::string model_id;
  std::string raw_response;
  DecodeParams decode;

  bool operator==(const PredictionRecord&) const = default;
};

struct RationaleRef {
  std::string session_id;
  std::string item_id;
  std::string reference_rationale;

  bool operator==(const RationaleRef&) const = default;
};

enum class ViolationKind {
  kEmptyId,
  kTooFewUtterances,
  kMissingSpeakerRole,
  kIndexOrder,
  kEmptyText,
  kMisplacedLabel,
  kEmptyLabel,
  kRatingOutOfRange,
  kIncompleteInventory,
  kUnknownItem,
};

struct Violation {
  ViolationKind kind;
  std::string message;

  bool operator==(const Violation&) const = default;
};

// Checks every Session invariant against the inventory. Violations are
// returned in a fixed order; an empty result means the session is valid.
std::vector<Violation> validate_session(const Session& s,
                                        const WaiInventory& inv);

}  // namespace alliance

#endif  // ALLIANCE_DOMAIN_HPP_
