#include "basketflex/crosswalk.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "basketflex/error.hpp"

namespace basketflex {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool is_reassign(const CrosswalkRule& rule) { return std::holds_alternative<ReassignRule>(rule.kind); }

bool forms_pool(const RuleKind& kind) {
  return std::holds_alternative<DirectRule>(kind) || std::holds_alternative<AggregateRule>(kind);
}

std::vector<CategoryId> consumed_by(const CrosswalkRule& rule) {
  return std::visit(overloaded{
                        [](const DirectRule& r) { return std::vector<CategoryId>{r.source}; },
                        [](const AggregateRule& r) { return r.sources; },
                        [](const ReassignRule& r) { return std::vector<CategoryId>{r.source}; },
                        [](const auto&) { return std::vector<CategoryId>{}; },
                    },
                    rule.kind);
}

// Covering rule per item (first one wins when duplicated).
std::map<ItemId, const CrosswalkRule*> covering_rules(const CrosswalkSpec& spec) {
  std::map<ItemId, const CrosswalkRule*> out;
  for (const auto& rule : spec.rules) {
    if (!is_reassign(rule)) out.emplace(rule.target, &rule);
  }
  return out;
}

std::string describe(const ValidationReport& report) {
  std::vector<std::string> parts;
  for (const auto& issue : report.issues) {
    parts.push_back(fmt::format("{}: {}", to_string(issue.kind), issue.message));
  }
  return fmt::format("{}", fmt::join(parts, "; "));
}

}  // namespace

std::set<ItemId> CrosswalkSpec::items() const {
  std::set<ItemId> out;
  for (const auto& rule : rules) {
    if (!is_reassign(rule)) out.insert(rule.target);
  }
  return out;
}

std::set<CategoryId> CrosswalkSpec::consumed_categories() const {
  std::set<CategoryId> out;
  for (const auto& rule : rules) {
    for (auto& c : consumed_by(rule)) out.insert(std::move(c));
  }
  return out;
}

std::string_view rule_kind_name(const RuleKind& kind) {
  return std::visit(overloaded{
                        [](const DirectRule&) { return std::string_view("direct"); },
                        [](const AggregateRule&) { return std::string_view("aggregate"); },
                        [](const ReassignRule&) { return std::string_view("reassign"); },
                        [](const FollowPeerRule&) { return std::string_view("follow_peer"); },
                        [](const ConstantRule&) { return std::string_view("constant"); },
                        [](const FollowTotalRule&) { return std::string_view("follow_total"); },
                    },
                    kind);
}

std::string_view to_string(ValidationIssue::Kind kind) {
  using K = ValidationIssue::Kind;
  switch (kind) {
    case K::UncoveredItem: return "UncoveredItem";
    case K::DuplicateRule: return "DuplicateRule";
    case K::UnknownItem: return "UnknownItem";
    case K::UnknownCategory: return "UnknownCategory";
    case K::UnmappedCategory: return "UnmappedCategory";
    case K::DuplicateConsumption: return "DuplicateConsumption";
    case K::PeerCycle: return "PeerCycle";
    case K::UnknownPeer: return "UnknownPeer";
    case K::TooFewSources: return "TooFewSources";
    case K::ReassignSameItem: return "ReassignSameItem";
    case K::ReassignTargetMismatch: return "ReassignTargetMismatch";
    case K::ReassignIntoNonPool: return "ReassignIntoNonPool";
  }
  return "Unknown";
}

bool ValidationReport::has(ValidationIssue::Kind kind) const {
  return std::any_of(issues.begin(), issues.end(), [kind](const auto& i) { return i.kind == kind; });
}

ValidationReport validate(const CrosswalkSpec& spec, const std::set<ItemId>& items,
                          const std::set<CategoryId>& categories) {
  using K = ValidationIssue::Kind;
  ValidationReport report;
  auto add = [&](K kind, std::vector<std::string> subjects, std::string message) {
    report.issues.push_back({kind, std::move(subjects), std::move(message)});
  };

  std::map<ItemId, int> cover_count;
  std::map<CategoryId, int> consumption;
  for (const auto& rule : spec.rules) {
    if (!is_reassign(rule)) {
      ++cover_count[rule.target];
      if (!items.contains(rule.target)) {
        add(K::UnknownItem, {rule.target.id()}, fmt::format("rule targets unknown item '{}'", rule.target.id()));
      }
    }
    for (const auto& c : consumed_by(rule)) ++consumption[c];
    if (const auto* agg = std::get_if<AggregateRule>(&rule.kind); agg && agg->sources.size() < 2) {
      add(K::TooFewSources, {rule.target.id()},
          fmt::format("aggregate rule for '{}' needs at least two sources", rule.target.id()));
    }
  }

  for (const auto& item : items) {
    auto it = cover_count.find(item);
    if (it == cover_count.end()) {
      add(K::UncoveredItem, {item.id()}, fmt::format("no rule for item '{}'", item.id()));
    }
  }
  for (const auto& [item, count] : cover_count) {
    if (count > 1) add(K::DuplicateRule, {item.id()}, fmt::format("item '{}' has {} rules", item.id(), count));
  }
  for (const auto& [category, count] : consumption) {
    if (count > 1) {
      add(K::DuplicateConsumption, {category.id()},
          fmt::format("category '{}' is consumed by {} rules", category.id(), count));
    }
    if (!categories.contains(category)) {
      add(K::UnknownCategory, {category.id()},
          fmt::format("category '{}' does not occur in the expenditure data", category.id()));
    }
  }
  for (const auto& category : categories) {
    if (!consumption.contains(category)) {
      add(K::UnmappedCategory, {category.id()}, fmt::format("category '{}' is not mapped", category.id()));
    }
  }

  const auto covering = covering_rules(spec);
  for (const auto& rule : spec.rules) {
    const auto* reassign = std::get_if<ReassignRule>(&rule.kind);
    if (!reassign) continue;
    if (reassign->from_item == reassign->to_item) {
      add(K::ReassignSameItem, {reassign->from_item.id()},
          fmt::format("reassign of '{}' moves within a single item", reassign->source.id()));
    }
    if (rule.target != reassign->to_item) {
      add(K::ReassignTargetMismatch, {rule.target.id(), reassign->to_item.id()},
          fmt::format("reassign rule target '{}' differs from destination '{}'", rule.target.id(),
                      reassign->to_item.id()));
    }
    for (const auto* item : {&reassign->from_item, &reassign->to_item}) {
      if (!items.contains(*item)) {
        add(K::UnknownItem, {item->id()}, fmt::format("reassign refers to unknown item '{}'", item->id()));
      }
    }
    auto dest = covering.find(reassign->to_item);
    if (dest != covering.end() && !forms_pool(dest->second->kind)) {
      add(K::ReassignIntoNonPool, {reassign->to_item.id()},
          fmt::format("reassign destination '{}' has a {} rule, not a pooled one", reassign->to_item.id(),
                      rule_kind_name(dest->second->kind)));
    }
  }

  // Every FollowPeer item has exactly one outgoing edge, so each walk either
  // reaches a non-peer rule, a dangling peer, or loops.
  std::set<std::set<ItemId>> cycles_seen;
  for (const auto& [item, rule] : covering) {
    if (!std::holds_alternative<FollowPeerRule>(rule->kind)) continue;
    std::vector<ItemId> path{item};
    ItemId current = item;
    while (true) {
      const auto& peer = std::get<FollowPeerRule>(covering.at(current)->kind).peer;
      auto next = covering.find(peer);
      if (next == covering.end()) {
        if (current == item) {
          add(K::UnknownPeer, {item.id(), peer.id()},
              fmt::format("'{}' follows '{}', which has no rule", item.id(), peer.id()));
        }
        break;
      }
      if (!std::holds_alternative<FollowPeerRule>(next->second->kind)) break;
      auto loop = std::find(path.begin(), path.end(), peer);
      if (loop != path.end()) {
        std::vector<ItemId> members(loop, path.end());
        std::set<ItemId> key(members.begin(), members.end());
        if (cycles_seen.insert(key).second) {
          std::rotate(members.begin(), std::min_element(members.begin(), members.end()), members.end());
          std::vector<std::string> ids;
          for (const auto& m : members) ids.push_back(m.id());
          add(K::PeerCycle, ids, fmt::format("follow_peer cycle [{}]", fmt::join(ids, ", ")));
        }
        break;
      }
      path.push_back(peer);
      current = peer;
    }
  }
  return report;
}

std::map<ItemId, Decimal> pool_expenditure(const CrosswalkSpec& spec, const std::map<CategoryId, Decimal>& amounts) {
  auto amount_of = [&](const CategoryId& c) {
    auto it = amounts.find(c);
    return it == amounts.end() ? Decimal{} : it->second;
  };
  std::map<ItemId, Decimal> pools;
  for (const auto& rule : spec.rules) {
    if (const auto* d = std::get_if<DirectRule>(&rule.kind)) {
      pools[rule.target] += amount_of(d->source);
    } else if (const auto* a = std::get_if<AggregateRule>(&rule.kind)) {
      auto& pool = pools[rule.target];
      for (const auto& s : a->sources) pool += amount_of(s);
    }
  }
  for (const auto& rule : spec.rules) {
    const auto* r = std::get_if<ReassignRule>(&rule.kind);
    if (!r) continue;
    // Each category is consumed once, so from_item's pool never received the
    // source; only the destination pool changes.
    pools[r->to_item] += amount_of(r->source);
  }
  return pools;
}

std::vector<ExpenditureRelativeVector> apply(const CrosswalkSpec& spec, const ExpenditurePanel& panel,
                                             const BaseExpenditure& base, ApplyOptions options) {
  const auto report = validate(spec, spec.items(), panel.categories());
  if (!report.ok()) {
    std::vector<std::string> subjects;
    for (const auto& issue : report.issues) subjects.emplace_back(to_string(issue.kind));
    throw Error(ErrorCode::SpecInvalid, "crosswalk spec is not usable: " + describe(report), subjects);
  }
  if (base.months.empty()) throw Error(ErrorCode::EmptyInput, "base period has no months");
  for (const auto& category : spec.consumed_categories()) {
    auto it = base.sums.find(category);
    if (it == base.sums.end() || !(it->second > Decimal{})) {
      throw Error(ErrorCode::ZeroBase,
                  fmt::format("category '{}' has no base-period expenditure", category.id()), {category.id()});
    }
  }

  const auto categories = panel.categories();
  auto month_amounts = [&](Month m) {
    std::map<CategoryId, Decimal> amounts;
    for (const auto& c : categories) amounts.emplace(c, panel.total(c, m));
    return amounts;
  };
  auto total_of = [](const std::map<CategoryId, Decimal>& amounts) {
    Decimal sum;
    for (const auto& [_, v] : amounts) sum += v;
    return sum;
  };

  // Base level per pooled item and for the total, in the chosen unit
  // (monthly total, or per day).
  std::map<ItemId, double> base_pool;
  double base_total = 0.0;
  const double n = static_cast<double>(base.months.size());
  if (!options.per_day) {
    for (const auto& [item, pool] : pool_expenditure(spec, base.sums)) base_pool[item] = pool.to_double() / n;
    base_total = total_of(base.sums).to_double() / n;
  } else {
    for (Month m : base.months) {
      const double days = m.days();
      const auto amounts = month_amounts(m);
      for (const auto& [item, pool] : pool_expenditure(spec, amounts)) base_pool[item] += pool.to_double() / days / n;
      base_total += total_of(amounts).to_double() / days / n;
    }
  }
  if (!(base_total > 0.0)) throw Error(ErrorCode::ZeroBase, "total base-period expenditure is zero", {"*total*"});

  const auto covering = covering_rules(spec);
  std::vector<ExpenditureRelativeVector> out;
  out.reserve(panel.months().size());
  for (Month m : panel.months()) {
    const double scale = options.per_day ? 1.0 / m.days() : 1.0;
    const auto amounts = month_amounts(m);
    const auto pools = pool_expenditure(spec, amounts);
    const double total = total_of(amounts).to_double() * scale;

    ExpenditureRelativeVector rel;
    rel.period = m;
    std::vector<ItemId> followers;
    for (const auto& [item, rule] : covering) {
      std::visit(overloaded{
                     [&](const FollowPeerRule&) { followers.push_back(item); },
                     [&](const ConstantRule&) { rel.relatives[item] = 1.0; },
                     [&](const FollowTotalRule&) { rel.relatives[item] = total / base_total; },
                     [&](const auto&) { rel.relatives[item] = pools.at(item).to_double() * scale / base_pool.at(item); },
                 },
                 rule->kind);
    }
    // Peer chains are acyclic (validated), so repeated passes resolve them
    // regardless of rule order.
    while (!followers.empty()) {
      std::vector<ItemId> pending;
      for (const auto& item : followers) {
        const auto& peer = std::get<FollowPeerRule>(covering.at(item)->kind).peer;
        auto it = rel.relatives.find(peer);
        if (it != rel.relatives.end()) {
          rel.relatives[item] = it->second;
        } else {
          pending.push_back(item);
        }
      }
      if (pending.size() == followers.size()) {
        throw Error(ErrorCode::InvariantViolation, "unresolvable follow_peer chain");
      }
      followers = std::move(pending);
    }
    out.push_back(std::move(rel));
  }
  return out;
}

CrosswalkSpec identity_crosswalk(const std::set<CategoryId>& categories) {
  CrosswalkSpec spec;
  spec.version = "identity";
  for (const auto& c : categories) spec.rules.push_back({ItemId(c.id()), DirectRule{c}, ""});
  return spec;
}

// ---------------------------------------------------------------------------
// YAML

namespace {

[[noreturn]] void schema_error(const std::string& source, const YAML::Node& node, const std::string& message) {
  const auto line = node.Mark().is_null() ? 0 : static_cast<std::size_t>(node.Mark().line + 1);
  throw Error(ErrorCode::SchemaError, message).at(source, line);
}

std::string required_scalar(const std::string& source, const YAML::Node& rule, const char* key) {
  const auto node = rule[key];
  if (!node || !node.IsScalar() || node.Scalar().empty()) {
    schema_error(source, rule, fmt::format("rule is missing '{}'", key));
  }
  return node.Scalar();
}

}  // namespace

CrosswalkSpec parse_crosswalk(const std::string& yaml_text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::SchemaError, e.what()).at(source, static_cast<std::size_t>(e.mark.line + 1));
  }
  if (!root.IsMap()) schema_error(source, root, "crosswalk must be a mapping");

  CrosswalkSpec spec;
  if (root["version"]) spec.version = root["version"].as<std::string>();
  if (root["notes"]) spec.notes = root["notes"].as<std::string>();
  const auto rules = root["rules"];
  if (!rules || !rules.IsSequence()) schema_error(source, root, "crosswalk needs a 'rules' list");

  for (const auto& node : rules) {
    if (!node.IsMap()) schema_error(source, node, "each rule must be a mapping");
    const auto kind = required_scalar(source, node, "kind");
    CrosswalkRule rule;
    if (node["notes"]) rule.notes = node["notes"].as<std::string>();

    if (kind == "direct") {
      rule.kind = DirectRule{CategoryId(required_scalar(source, node, "source"))};
    } else if (kind == "aggregate") {
      const auto sources = node["sources"];
      if (!sources || !sources.IsSequence()) schema_error(source, node, "aggregate rule needs a 'sources' list");
      AggregateRule agg;
      for (const auto& s : sources) agg.sources.emplace_back(s.as<std::string>());
      rule.kind = std::move(agg);
    } else if (kind == "reassign") {
      ReassignRule r{CategoryId(required_scalar(source, node, "source")), ItemId(required_scalar(source, node, "from")),
                     ItemId(required_scalar(source, node, "to"))};
      rule.target = node["item"] ? ItemId(node["item"].as<std::string>()) : r.to_item;
      rule.kind = std::move(r);
    } else if (kind == "follow_peer") {
      rule.kind = FollowPeerRule{ItemId(required_scalar(source, node, "peer"))};
    } else if (kind == "constant") {
      rule.kind = ConstantRule{};
    } else if (kind == "follow_total") {
      rule.kind = FollowTotalRule{};
    } else {
      schema_error(source, node, fmt::format("unknown rule kind '{}'", kind));
    }
    if (!std::holds_alternative<ReassignRule>(rule.kind)) rule.target = ItemId(required_scalar(source, node, "item"));
    spec.rules.push_back(std::move(rule));
  }
  return spec;
}

CrosswalkSpec load_crosswalk(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, fmt::format("cannot open '{}'", path.string()), {path.string()});
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_crosswalk(buffer.str(), path.string());
}

std::string format_crosswalk(const CrosswalkSpec& spec) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "version" << YAML::Value << spec.version;
  if (!spec.notes.empty()) out << YAML::Key << "notes" << YAML::Value << spec.notes;
  out << YAML::Key << "rules" << YAML::Value << YAML::BeginSeq;
  for (const auto& rule : spec.rules) {
    out << YAML::BeginMap;
    out << YAML::Key << "item" << YAML::Value << rule.target.id();
    out << YAML::Key << "kind" << YAML::Value << std::string(rule_kind_name(rule.kind));
    std::visit(overloaded{
                   [&](const DirectRule& r) { out << YAML::Key << "source" << YAML::Value << r.source.id(); },
                   [&](const AggregateRule& r) {
                     out << YAML::Key << "sources" << YAML::Value << YAML::Flow << YAML::BeginSeq;
                     for (const auto& s : r.sources) out << s.id();
                     out << YAML::EndSeq;
                   },
                   [&](const ReassignRule& r) {
                     out << YAML::Key << "source" << YAML::Value << r.source.id();
                     out << YAML::Key << "from" << YAML::Value << r.from_item.id();
                     out << YAML::Key << "to" << YAML::Value << r.to_item.id();
                   },
                   [&](const FollowPeerRule& r) { out << YAML::Key << "peer" << YAML::Value << r.peer.id(); },
                   [](const auto&) {},
               },
               rule.kind);
    if (!rule.notes.empty()) out << YAML::Key << "notes" << YAML::Value << rule.notes;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace basketflex
