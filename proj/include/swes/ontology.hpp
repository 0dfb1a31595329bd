#pragma once

#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "swes/core.hpp"

namespace swes {

// Directed, labeled edge between two declared classes.
struct RelationEdge {
  ElementName source;
  ElementName target;
  ElementName label;
  double mu = 1.0;

  friend bool operator==(const RelationEdge&, const RelationEdge&) = default;
};

// Classes, per-class datatype properties, and labeled relations. Iteration
// order everywhere is the document order of first declaration; the graph is
// treated as immutable once a parser or builder has finished with it.
class OntologyGraph {
 public:
  std::string source_id;

  // Keeps the first declaration when a class is re-declared.
  bool add_class(std::string_view name, double mu = 1.0) {
    ElementName cls = make_element_name(name);
    validate_membership(mu, "class");
    if (class_index_.contains(cls)) return false;
    class_index_.emplace(cls, classes_.size());
    classes_.push_back({std::move(cls), mu});
    return true;
  }

  void add_property(std::string_view class_name, std::string_view property_name,
                    double mu = 1.0) {
    ElementName cls = make_element_name(class_name);
    ElementName prop = make_element_name(property_name);
    validate_membership(mu, "property");
    require_class(cls, "property domain");
    auto& list = properties_[cls];
    for (const WeightedName& existing : list) {
      if (existing.name == prop) {
        throw std::invalid_argument("duplicate property declaration: '" + prop +
                                    "' on class '" + cls + "'");
      }
    }
    list.push_back({std::move(prop), mu});
  }

  void add_relation(std::string_view source, std::string_view target,
                    std::string_view label, double mu = 1.0) {
    RelationEdge edge{make_element_name(source), make_element_name(target),
                      make_element_name(label), mu};
    validate_membership(mu, "relation");
    require_class(edge.source, "relation source");
    require_class(edge.target, "relation target");
    std::string key = edge.source + '\x1f' + edge.target + '\x1f' + edge.label;
    if (!relation_keys_.insert(std::move(key)).second) {
      throw std::invalid_argument("duplicate relation: " + edge.source + " -" +
                                  edge.label + "-> " + edge.target);
    }
    relations_.push_back(std::move(edge));
  }

  // Applies an annotation to every element with the given local name: the
  // class, any property so named, and every edge carrying the label.
  // Returns how many elements were touched.
  int set_membership(std::string_view name, double mu) {
    ElementName element = make_element_name(name);
    validate_membership(mu, "annotation");
    int touched = 0;
    if (auto it = class_index_.find(element); it != class_index_.end()) {
      classes_[it->second].mu = mu;
      ++touched;
    }
    for (auto& [cls, list] : properties_) {
      for (WeightedName& prop : list) {
        if (prop.name == element) {
          prop.mu = mu;
          ++touched;
        }
      }
    }
    for (RelationEdge& edge : relations_) {
      if (edge.label == element) {
        edge.mu = mu;
        ++touched;
      }
    }
    return touched;
  }

  bool has_class(const ElementName& name) const { return class_index_.contains(name); }

  double class_mu(const ElementName& name) const {
    auto it = class_index_.find(name);
    if (it == class_index_.end()) {
      throw std::invalid_argument("unknown class: '" + name + "'");
    }
    return classes_[it->second].mu;
  }

  const std::vector<WeightedName>& classes() const { return classes_; }

  const std::vector<WeightedName>& properties_of(const ElementName& cls) const {
    static const std::vector<WeightedName> kEmpty;
    auto it = properties_.find(cls);
    return it == properties_.end() ? kEmpty : it->second;
  }

  const std::vector<RelationEdge>& relations() const { return relations_; }

  bool empty() const { return classes_.empty(); }

  // Structural equality: elements and membership degrees, in declaration
  // order. source_id is provenance and intentionally not compared.
  friend bool operator==(const OntologyGraph& lhs, const OntologyGraph& rhs) {
    if (lhs.classes_ != rhs.classes_ || lhs.relations_ != rhs.relations_) return false;
    for (const WeightedName& cls : lhs.classes_) {
      if (lhs.properties_of(cls.name) != rhs.properties_of(cls.name)) return false;
    }
    return true;
  }

 private:
  void require_class(const ElementName& name, const char* context) const {
    if (!class_index_.contains(name)) {
      throw std::invalid_argument(std::string(context) + " references undeclared class '" +
                                  name + "'");
    }
  }

  std::vector<WeightedName> classes_;
  std::unordered_map<ElementName, std::size_t> class_index_;
  std::unordered_map<ElementName, std::vector<WeightedName>> properties_;
  std::vector<RelationEdge> relations_;
  std::unordered_set<std::string> relation_keys_;
};

// The three element categories of one class: its datatype properties, the
// labels of edges pointing into it, and the labels of edges leaving it.
struct CategorizedParts {
  std::vector<WeightedName> properties;
  std::vector<WeightedName> incoming;
  std::vector<WeightedName> outgoing;
};

namespace detail {

// Collapse duplicate labels keeping first position and maximum membership.
inline void append_label(std::vector<WeightedName>& out, const ElementName& label, double mu) {
  for (WeightedName& existing : out) {
    if (existing.name == label) {
      if (mu > existing.mu) existing.mu = mu;
      return;
    }
  }
  out.push_back({label, mu});
}

}  // namespace detail

inline CategorizedParts categorize_parts(const OntologyGraph& graph, const ElementName& cls) {
  if (!graph.has_class(cls)) {
    throw std::invalid_argument("unknown class: '" + cls + "'");
  }
  CategorizedParts parts;
  parts.properties = graph.properties_of(cls);
  for (const RelationEdge& edge : graph.relations()) {
    if (edge.target == cls) detail::append_label(parts.incoming, edge.label, edge.mu);
    if (edge.source == cls) detail::append_label(parts.outgoing, edge.label, edge.mu);
  }
  return parts;
}

}  // namespace swes
