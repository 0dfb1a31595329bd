#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "swes/core.hpp"
#include "swes/dataset.hpp"

namespace swes {

// An attribute=value test; the atomic statement of antecedents, consequents,
// and facts. An empty value is the NONE sentinel.
struct Selector {
  Attribute attribute = Attribute::Class;
  std::string value;

  friend bool operator==(const Selector&, const Selector&) = default;
  friend auto operator<=>(const Selector&, const Selector&) = default;
};

inline std::string format_selector(const Selector& selector) {
  return std::string(attribute_name(selector.attribute)) + "=" + display_value(selector.value);
}

// Parses "attribute=value"; the value "∅" denotes NONE.
inline Selector parse_selector(std::string_view text) {
  auto eq = text.find('=');
  if (eq == std::string_view::npos) {
    throw std::invalid_argument("expected attribute=value, got '" + std::string(text) + "'");
  }
  auto attr = attribute_from_name(strip(text.substr(0, eq)));
  if (!attr) {
    throw std::invalid_argument("unknown attribute '" + std::string(strip(text.substr(0, eq))) +
                                "' (use class, property, incoming, or outgoing)");
  }
  std::string_view value_text = strip(text.substr(eq + 1));
  if (value_text.empty()) {
    throw std::invalid_argument("empty value in '" + std::string(text) +
                                "' (use " + std::string(kNoneText) + " for the none sentinel)");
  }
  return {*attr, value_from_display(value_text)};
}

// Conjunction of selectors, at most one per attribute and never on the
// learning target.
struct Conjunction {
  std::vector<Selector> selectors;

  bool empty() const { return selectors.empty(); }

  bool constrains(Attribute attr) const {
    for (const Selector& s : selectors) {
      if (s.attribute == attr) return true;
    }
    return false;
  }

  bool matches(const DataRow& row) const {
    for (const Selector& s : selectors) {
      if (row.cell(s.attribute).value != s.value) return false;
    }
    return true;
  }

  friend bool operator==(const Conjunction&, const Conjunction&) = default;
};

struct RuleStats {
  int covered = 0;
  int correct = 0;

  double laplace() const { return (correct + 1) / static_cast<double>(covered + 2); }

  friend bool operator==(const RuleStats&, const RuleStats&) = default;
};

struct Rule {
  Conjunction antecedent;
  Selector consequent;
  RuleStats stats;

  friend bool operator==(const Rule&, const Rule&) = default;
};

struct LearnerConfig {
  Attribute target = Attribute::Class;
  int min_coverage = 2;
  double min_laplace = 0.8;
  int beam_width = 5;
  int max_antecedent_len = 3;

  void validate() const {
    if (min_coverage < 1) throw std::invalid_argument("min_coverage must be positive");
    if (!(min_laplace > 0.0 && min_laplace < 1.0)) {
      throw std::invalid_argument("min_laplace must lie in (0,1)");
    }
    if (beam_width < 1) throw std::invalid_argument("beam_width must be positive");
    if (max_antecedent_len < 1 || max_antecedent_len > 3) {
      throw std::invalid_argument("max_antecedent_len must lie in 1..3");
    }
  }
};

// Crisp coverage counts; membership degrees play no role here.
inline RuleStats evaluate(const Conjunction& conj, const Selector& consequent,
                          const DataSet& dataset) {
  RuleStats stats;
  for (const DataRow& row : dataset.rows) {
    if (!conj.matches(row)) continue;
    ++stats.covered;
    if (row.cell(consequent.attribute).value == consequent.value) ++stats.correct;
  }
  return stats;
}

// Every one-selector extension on a free non-target attribute, with values
// drawn from the dataset column; ordered by attribute, then value.
inline std::vector<Conjunction> specialize(const Conjunction& conj, const DataSet& dataset,
                                           Attribute target) {
  if (conj.constrains(target)) {
    throw std::invalid_argument("conjunction constrains the learning target");
  }
  std::vector<Conjunction> children;
  for (Attribute attr : kAllAttributes) {
    if (attr == target || conj.constrains(attr)) continue;
    std::set<std::string> values;
    for (const DataRow& row : dataset.rows) values.insert(row.cell(attr).value);
    for (const std::string& value : values) {
      Conjunction child = conj;
      child.selectors.push_back({attr, value});
      children.push_back(std::move(child));
    }
  }
  return children;
}

namespace detail {

// Columnar value-coded view of a dataset. Codes follow the lexicographic
// order of the column's distinct values, so iterating codes reproduces the
// specialize() enumeration order.
struct ColumnIndex {
  std::vector<std::string> values;
  std::vector<int32_t> codes;  // one per row
};

struct IndexedDataSet {
  std::array<ColumnIndex, kAttributeCount> columns;
  std::size_t row_count = 0;

  const ColumnIndex& column(Attribute attr) const { return columns[static_cast<int>(attr)]; }
};

inline IndexedDataSet index_dataset(const DataSet& dataset) {
  IndexedDataSet indexed;
  indexed.row_count = dataset.rows.size();
  for (Attribute attr : kAllAttributes) {
    ColumnIndex& column = indexed.columns[static_cast<int>(attr)];
    std::set<std::string> distinct;
    for (const DataRow& row : dataset.rows) distinct.insert(row.cell(attr).value);
    column.values.assign(distinct.begin(), distinct.end());
    std::unordered_map<std::string, int32_t> code_of;
    for (std::size_t i = 0; i < column.values.size(); ++i) {
      code_of.emplace(column.values[i], static_cast<int32_t>(i));
    }
    column.codes.reserve(dataset.rows.size());
    for (const DataRow& row : dataset.rows) {
      column.codes.push_back(code_of.at(row.cell(attr).value));
    }
  }
  return indexed;
}

// A candidate antecedent inside one beam search: value code per attribute,
// -1 meaning unconstrained.
struct BeamNode {
  std::array<int32_t, kAttributeCount> sel{-1, -1, -1, -1};
  int len = 0;
  int covered = 0;
  int correct = 0;
  std::vector<uint32_t> covered_rows;

  double laplace() const { return (correct + 1) / static_cast<double>(covered + 2); }
};

// Beam ordering: higher laplace, then higher coverage, then shorter
// antecedent, then the canonical (attribute, value-code) sequence. Value
// codes compare like the value strings, so the final tie-break matches the
// specialize enumeration order.
inline bool node_precedes(const BeamNode& a, const BeamNode& b) {
  double la = a.laplace(), lb = b.laplace();
  if (la != lb) return la > lb;
  if (a.covered != b.covered) return a.covered > b.covered;
  if (a.len != b.len) return a.len < b.len;
  for (int attr = 0; attr < kAttributeCount; ++attr) {
    bool a_has = a.sel[attr] >= 0, b_has = b.sel[attr] >= 0;
    if (a_has != b_has) return a_has;  // the smaller attribute comes first
    if (a_has && a.sel[attr] != b.sel[attr]) return a.sel[attr] < b.sel[attr];
  }
  return false;
}

inline bool node_matches_row(const IndexedDataSet& indexed,
                             const std::array<int32_t, kAttributeCount>& sel, uint32_t row) {
  for (int attr = 0; attr < kAttributeCount; ++attr) {
    if (sel[attr] >= 0 && indexed.columns[attr].codes[row] != sel[attr]) return false;
  }
  return true;
}

inline BeamNode make_node(const IndexedDataSet& indexed,
                          const std::array<int32_t, kAttributeCount>& sel,
                          const std::vector<uint32_t>& live, int target, int32_t target_code) {
  BeamNode node;
  node.sel = sel;
  for (int attr = 0; attr < kAttributeCount; ++attr) {
    if (sel[attr] >= 0) ++node.len;
  }
  for (uint32_t row : live) {
    if (!node_matches_row(indexed, sel, row)) continue;
    node.covered_rows.push_back(row);
    if (indexed.columns[target].codes[row] == target_code) ++node.correct;
  }
  node.covered = static_cast<int>(node.covered_rows.size());
  return node;
}

// One general-to-specific beam search over the live rows; returns the best
// conjunction seen at any depth.
inline BeamNode beam_search(const IndexedDataSet& indexed, const std::vector<uint32_t>& live,
                            int target, int32_t target_code, const LearnerConfig& config) {
  BeamNode best = make_node(indexed, {-1, -1, -1, -1}, live, target, target_code);
  std::vector<BeamNode> frontier{best};
  std::set<std::array<int32_t, kAttributeCount>> visited{best.sel};

  for (int depth = 1; depth <= config.max_antecedent_len; ++depth) {
    std::vector<BeamNode> children;
    for (const BeamNode& parent : frontier) {
      for (int attr = 0; attr < kAttributeCount; ++attr) {
        if (attr == target || parent.sel[attr] >= 0) continue;
        const ColumnIndex& column = indexed.columns[attr];
        // Histogram the parent's coverage; child stats for every value of
        // this column fall out of one pass.
        std::vector<int> covered(column.values.size(), 0);
        std::vector<int> correct(column.values.size(), 0);
        for (uint32_t row : parent.covered_rows) {
          int32_t code = column.codes[row];
          ++covered[code];
          if (indexed.columns[target].codes[row] == target_code) ++correct[code];
        }
        for (int32_t code = 0; code < static_cast<int32_t>(column.values.size()); ++code) {
          std::array<int32_t, kAttributeCount> sel = parent.sel;
          sel[attr] = code;
          if (!visited.insert(sel).second) continue;
          BeamNode child;
          child.sel = sel;
          child.len = parent.len + 1;
          child.covered = covered[code];
          child.correct = correct[code];
          children.push_back(std::move(child));
        }
      }
    }
    if (children.empty()) break;
    std::sort(children.begin(), children.end(), node_precedes);
    if (node_precedes(children.front(), best)) best = children.front();
    if (static_cast<int>(children.size()) > config.beam_width) {
      children.resize(config.beam_width);
    }
    // Materialize coverage lists only for the survivors.
    for (BeamNode& child : children) {
      child.covered_rows.reserve(child.covered);
      for (uint32_t row : live) {
        if (node_matches_row(indexed, child.sel, row)) child.covered_rows.push_back(row);
      }
    }
    frontier = std::move(children);
  }
  if (best.covered_rows.empty() && best.covered > 0) {
    best = make_node(indexed, best.sel, live, target, target_code);
  }
  return best;
}

// A longer antecedent is never returned when one of its sub-conjunctions is
// at least as good on both laplace and coverage; the shorter rule wins.
inline BeamNode apply_subset_guard(const IndexedDataSet& indexed,
                                   const std::vector<uint32_t>& live, int target,
                                   int32_t target_code, const BeamNode& best) {
  std::vector<int> constrained;
  for (int attr = 0; attr < kAttributeCount; ++attr) {
    if (best.sel[attr] >= 0) constrained.push_back(attr);
  }
  BeamNode winner = best;
  for (unsigned mask = 0; mask + 1 < (1u << constrained.size()); ++mask) {
    std::array<int32_t, kAttributeCount> sel{-1, -1, -1, -1};
    for (std::size_t bit = 0; bit < constrained.size(); ++bit) {
      if (mask & (1u << bit)) sel[constrained[bit]] = best.sel[constrained[bit]];
    }
    BeamNode subset = make_node(indexed, sel, live, target, target_code);
    if (subset.laplace() >= best.laplace() && subset.covered >= best.covered &&
        node_precedes(subset, winner)) {
      winner = std::move(subset);
    }
  }
  return winner;
}

inline Rule node_to_rule(const IndexedDataSet& indexed, const BeamNode& node,
                         const Selector& consequent) {
  Rule rule;
  for (int attr = 0; attr < kAttributeCount; ++attr) {
    if (node.sel[attr] >= 0) {
      rule.antecedent.selectors.push_back(
          {static_cast<Attribute>(attr), indexed.columns[attr].values[node.sel[attr]]});
    }
  }
  rule.consequent = consequent;
  rule.stats = {node.covered, node.correct};
  return rule;
}

}  // namespace detail

// Separate-and-conquer covering. For each distinct target value in
// lexicographic order, beam searches start from the empty conjunction
// against the full dataset; each accepted rule removes the rows it covers
// correctly before the next search. A rule is accepted when it meets the
// coverage and laplace thresholds and explains at least one remaining row of
// its target value (the invariant that uncovered rows strictly decrease).
inline std::vector<Rule> learn_rules(const DataSet& dataset, const LearnerConfig& config) {
  config.validate();
  if (dataset.rows.empty()) throw std::invalid_argument("cannot learn from an empty dataset");

  const detail::IndexedDataSet indexed = detail::index_dataset(dataset);
  const int target = static_cast<int>(config.target);
  const detail::ColumnIndex& target_column = indexed.columns[target];

  std::vector<Rule> rules;
  for (int32_t value_code = 0; value_code < static_cast<int32_t>(target_column.values.size());
       ++value_code) {
    const Selector consequent{config.target, target_column.values[value_code]};
    std::vector<uint32_t> live(indexed.row_count);
    for (std::size_t i = 0; i < live.size(); ++i) live[i] = static_cast<uint32_t>(i);

    while (true) {
      bool any_target_row = false;
      for (uint32_t row : live) {
        if (target_column.codes[row] == value_code) {
          any_target_row = true;
          break;
        }
      }
      if (!any_target_row) break;

      detail::BeamNode best = detail::beam_search(indexed, live, target, value_code, config);
      if (best.covered < config.min_coverage || best.laplace() < config.min_laplace ||
          best.correct < 1) {
        break;
      }
      best = detail::apply_subset_guard(indexed, live, target, value_code, best);
      rules.push_back(detail::node_to_rule(indexed, best, consequent));

      std::vector<uint32_t> next_live;
      next_live.reserve(live.size());
      std::size_t cursor = 0;
      for (uint32_t row : live) {
        bool correctly_covered = cursor < best.covered_rows.size() &&
                                 best.covered_rows[cursor] == row &&
                                 target_column.codes[row] == value_code;
        if (cursor < best.covered_rows.size() && best.covered_rows[cursor] == row) ++cursor;
        if (!correctly_covered) next_live.push_back(row);
      }
      live = std::move(next_live);
    }
  }
  return rules;
}

}  // namespace swes
