#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "basketflex/basket.hpp"
#include "basketflex/decimal.hpp"
#include "basketflex/ingest.hpp"

namespace basketflex {

// Expenditure relative equals that of a single category.
struct DirectRule {
  CategoryId source;
};

// Several categories pooled into one item.
struct AggregateRule {
  std::vector<CategoryId> sources;
};

// Moves a category that the CPI classification files under `from_item` into
// `to_item`'s pool (e.g. meals eaten out, from food to culture and
// entertainment). The rule's target is `to_item`. Reassign rules modify pools;
// they do not count as the covering rule of their target.
struct ReassignRule {
  CategoryId source;
  ItemId from_item;
  ItemId to_item;
};

// Same expenditure relative as another item.
struct FollowPeerRule {
  ItemId peer;
};

// Expenditure assumed unchanged (relative 1).
struct ConstantRule {};

// Moves with total spending across all categories.
struct FollowTotalRule {};

using RuleKind = std::variant<DirectRule, AggregateRule, ReassignRule, FollowPeerRule, ConstantRule, FollowTotalRule>;

struct CrosswalkRule {
  ItemId target;
  RuleKind kind;
  std::string notes;
};

struct CrosswalkSpec {
  std::string version;
  std::string notes;
  std::vector<CrosswalkRule> rules;

  // Targets of covering (non-Reassign) rules.
  std::set<ItemId> items() const;
  // Categories consumed by Direct, Aggregate and Reassign rules.
  std::set<CategoryId> consumed_categories() const;
};

std::string_view rule_kind_name(const RuleKind& kind);

struct ValidationIssue {
  enum class Kind {
    UncoveredItem,
    DuplicateRule,
    UnknownItem,
    UnknownCategory,
    UnmappedCategory,
    DuplicateConsumption,
    PeerCycle,
    UnknownPeer,
    TooFewSources,
    ReassignSameItem,
    ReassignTargetMismatch,
    ReassignIntoNonPool,
  };
  Kind kind;
  std::vector<std::string> subjects;
  std::string message;
};

std::string_view to_string(ValidationIssue::Kind kind);

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const { return issues.empty(); }
  bool has(ValidationIssue::Kind kind) const;
};

// Checks the spec against the CPI items of the official basket and the
// categories present in the expenditure data. Never throws.
ValidationReport validate(const CrosswalkSpec& spec, const std::set<ItemId>& items,
                          const std::set<CategoryId>& categories);

// Pools category amounts into items following Direct, Aggregate and Reassign
// rules. Items with other rule kinds get no pool.
std::map<ItemId, Decimal> pool_expenditure(const CrosswalkSpec& spec, const std::map<CategoryId, Decimal>& amounts);

struct ApplyOptions {
  // Compare average daily spending instead of monthly totals, so month
  // length does not move the relatives.
  bool per_day = false;
};

// Expenditure relatives per panel month for every item the spec covers.
// Throws SpecInvalid (with the report in the message) or ZeroBase(category).
std::vector<ExpenditureRelativeVector> apply(const CrosswalkSpec& spec, const ExpenditurePanel& panel,
                                             const BaseExpenditure& base, ApplyOptions options = {});

// Direct rules mapping each category onto the item with the same id.
CrosswalkSpec identity_crosswalk(const std::set<CategoryId>& categories);

// YAML text format (see docs/crosswalk.md).
CrosswalkSpec parse_crosswalk(const std::string& yaml_text, const std::string& source = "<crosswalk>");
CrosswalkSpec load_crosswalk(const std::filesystem::path& path);
std::string format_crosswalk(const CrosswalkSpec& spec);

}  // namespace basketflex
