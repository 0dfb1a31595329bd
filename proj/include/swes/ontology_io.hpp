#pragma once

#include <cstdlib>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "swes/core.hpp"
#include "swes/ontology.hpp"

namespace swes {

enum class OntologyFormat { TurtleSubset, JsonInterchange };

namespace detail {

// --- Turtle subset ---------------------------------------------------------
//
// Accepted statements:
//   @prefix p: <iri> .
//   <C> a owl:Class .
//   <P> a owl:DatatypeProperty ; rdfs:domain <C> .
//   <R> a owl:ObjectProperty ; rdfs:domain <C1> ; rdfs:range <C2> .
//   <C1> rdfs:subClassOf <C2> .
//   <C1> owl:equivalentClass <C2> .
//   <E> swes:membership "0.95"^^xsd:decimal .
//
// Terms may be written as <iri> or prefix:local. Well-known vocabulary is
// recognized by its conventional prefixed form even when the prefix is not
// declared. Local names are the text after the last '#' or '/'.

inline constexpr std::string_view kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view kRdfsDomain = "http://www.w3.org/2000/01/rdf-schema#domain";
inline constexpr std::string_view kRdfsRange = "http://www.w3.org/2000/01/rdf-schema#range";
inline constexpr std::string_view kRdfsSubClassOf =
    "http://www.w3.org/2000/01/rdf-schema#subClassOf";
inline constexpr std::string_view kOwlClass = "http://www.w3.org/2002/07/owl#Class";
inline constexpr std::string_view kOwlDatatypeProperty =
    "http://www.w3.org/2002/07/owl#DatatypeProperty";
inline constexpr std::string_view kOwlObjectProperty =
    "http://www.w3.org/2002/07/owl#ObjectProperty";
inline constexpr std::string_view kOwlEquivalentClass =
    "http://www.w3.org/2002/07/owl#equivalentClass";
inline constexpr std::string_view kXsdDecimal = "http://www.w3.org/2001/XMLSchema#decimal";
inline constexpr std::string_view kSwesMembership = "http://swes.example/ns#membership";

struct TurtleTerm {
  enum class Kind { Iri, PrefixedName, Literal, Keyword } kind = Kind::Iri;
  std::string text;      // iri body, "prefix:local", literal lexical form, or keyword
  std::string datatype;  // literal datatype as written, empty when absent
  int line = 0;
  int column = 0;
};

struct Triple {
  TurtleTerm subject;
  TurtleTerm predicate;
  TurtleTerm object;
};

class TurtleLexer {
 public:
  explicit TurtleLexer(std::string_view text) : text_(text) {}

  struct Token {
    enum class Kind { Iri, PrefixedName, Literal, Punct, AtKeyword, End } kind;
    std::string text;
    std::string datatype;
    int line = 1;
    int column = 1;
  };

  Token next() {
    skip_whitespace_and_comments();
    Token token;
    token.line = line_;
    token.column = column_;
    if (at_end()) {
      token.kind = Token::Kind::End;
      return token;
    }
    char c = peek();
    if (c == '<') {
      token.kind = Token::Kind::Iri;
      token.text = read_iri();
    } else if (c == '"') {
      token.kind = Token::Kind::Literal;
      token.text = read_quoted();
      if (remaining().starts_with("^^")) {
        advance();
        advance();
        if (!at_end() && peek() == '<') {
          token.datatype = read_iri();
        } else {
          token.datatype = read_pname();
        }
      }
    } else if (c == '.' || c == ';') {
      token.kind = Token::Kind::Punct;
      token.text = std::string(1, c);
      advance();
    } else if (c == '@') {
      advance();
      token.kind = Token::Kind::AtKeyword;
      token.text = read_bare_word();
    } else {
      token.kind = Token::Kind::PrefixedName;
      token.text = read_pname();
    }
    return token;
  }

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  std::string_view remaining() const { return text_.substr(pos_); }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_whitespace_and_comments() {
    while (!at_end()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        while (!at_end() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string read_iri() {
    int start_line = line_, start_col = column_;
    advance();  // '<'
    std::string out;
    while (!at_end() && peek() != '>') {
      if (peek() == '\n') throw ParseError(start_line, start_col, "unterminated IRI");
      out.push_back(peek());
      advance();
    }
    if (at_end()) throw ParseError(start_line, start_col, "unterminated IRI");
    advance();  // '>'
    return out;
  }

  std::string read_quoted() {
    int start_line = line_, start_col = column_;
    advance();  // '"'
    std::string out;
    while (!at_end() && peek() != '"') {
      if (peek() == '\n') throw ParseError(start_line, start_col, "unterminated string literal");
      out.push_back(peek());
      advance();
    }
    if (at_end()) throw ParseError(start_line, start_col, "unterminated string literal");
    advance();  // '"'
    return out;
  }

  static bool is_name_char(char c) {
    return !(c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == ';' || c == '#' ||
             c == '<' || c == '"' || c == '\0');
  }

  std::string read_pname() {
    std::string out;
    // '.' terminates a statement; inside a name it only counts when followed
    // by more name characters (e.g. a decimal-less version tag never occurs
    // in this subset, so a trailing '.' is always punctuation).
    while (!at_end() && is_name_char(peek())) {
      if (peek() == '.') {
        std::size_t look = pos_ + 1;
        bool more = look < text_.size() && is_name_char(text_[look]) && text_[look] != '.';
        if (!more) break;
      }
      out.push_back(peek());
      advance();
    }
    if (out.empty()) {
      throw ParseError(line_, column_, std::string("unexpected character '") + peek() + "'");
    }
    return out;
  }

  std::string read_bare_word() {
    std::string out;
    while (!at_end() && ((peek() >= 'a' && peek() <= 'z') || (peek() >= 'A' && peek() <= 'Z'))) {
      out.push_back(peek());
      advance();
    }
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

class TurtleParser {
 public:
  explicit TurtleParser(std::string_view text) : lexer_(text) {}

  std::vector<Triple> parse_triples() {
    std::vector<Triple> triples;
    Token token = lexer_.next();
    while (token.kind != Token::Kind::End) {
      if (token.kind == Token::Kind::AtKeyword) {
        if (token.text != "prefix") {
          throw ParseError(token.line, token.column, "unsupported directive '@" + token.text + "'");
        }
        parse_prefix_declaration();
      } else if (token.kind == Token::Kind::Iri || token.kind == Token::Kind::PrefixedName) {
        parse_statement(token, triples);
      } else {
        throw ParseError(token.line, token.column,
                         "expected a subject or @prefix, got '" + token.text + "'");
      }
      token = lexer_.next();
    }
    return triples;
  }

  const std::map<std::string, std::string>& prefixes() const { return prefixes_; }

 private:
  using Token = TurtleLexer::Token;

  void parse_prefix_declaration() {
    Token name = lexer_.next();
    if (name.kind != Token::Kind::PrefixedName || name.text.empty() || name.text.back() != ':') {
      throw ParseError(name.line, name.column, "expected 'prefix:' after @prefix");
    }
    Token iri = lexer_.next();
    if (iri.kind != Token::Kind::Iri) {
      throw ParseError(iri.line, iri.column, "expected <iri> in @prefix declaration");
    }
    expect_punct(".");
    prefixes_[name.text.substr(0, name.text.size() - 1)] = iri.text;
  }

  void parse_statement(const Token& subject_token, std::vector<Triple>& triples) {
    TurtleTerm subject = to_term(subject_token);
    while (true) {
      Token pred_token = lexer_.next();
      if (pred_token.kind != Token::Kind::Iri && pred_token.kind != Token::Kind::PrefixedName) {
        throw ParseError(pred_token.line, pred_token.column, "expected a predicate");
      }
      Token obj_token = lexer_.next();
      if (obj_token.kind != Token::Kind::Iri && obj_token.kind != Token::Kind::PrefixedName &&
          obj_token.kind != Token::Kind::Literal) {
        throw ParseError(obj_token.line, obj_token.column, "expected an object");
      }
      triples.push_back({subject, to_term(pred_token), to_term(obj_token)});
      Token punct = lexer_.next();
      if (punct.kind != Token::Kind::Punct) {
        throw ParseError(punct.line, punct.column, "expected '.' or ';' after object");
      }
      if (punct.text == ".") break;
    }
  }

  void expect_punct(std::string_view text) {
    Token token = lexer_.next();
    if (token.kind != Token::Kind::Punct || token.text != text) {
      throw ParseError(token.line, token.column, "expected '" + std::string(text) + "'");
    }
  }

  static TurtleTerm to_term(const Token& token) {
    TurtleTerm term;
    term.line = token.line;
    term.column = token.column;
    term.text = token.text;
    term.datatype = token.datatype;
    switch (token.kind) {
      case Token::Kind::Iri:
        term.kind = TurtleTerm::Kind::Iri;
        break;
      case Token::Kind::Literal:
        term.kind = TurtleTerm::Kind::Literal;
        break;
      case Token::Kind::PrefixedName:
        term.kind = token.text == "a" ? TurtleTerm::Kind::Keyword : TurtleTerm::Kind::PrefixedName;
        break;
      default:
        throw ParseError(token.line, token.column, "unexpected token '" + token.text + "'");
    }
    return term;
  }

  TurtleLexer lexer_;
  std::map<std::string, std::string> prefixes_;
};

class TurtleDocumentBuilder {
 public:
  OntologyGraph build(std::string_view text, std::string source_id) {
    TurtleParser parser(text);
    std::vector<Triple> triples = parser.parse_triples();
    prefixes_ = parser.prefixes();

    OntologyGraph graph;
    graph.source_id = std::move(source_id);

    // First pass: class declarations anchor iteration order; forward
    // references from properties and relations are allowed.
    for (const Triple& triple : triples) {
      if (is_type_predicate(triple.predicate) && matches(triple.object, "owl:Class", kOwlClass)) {
        graph.add_class(local_name(triple.subject));
      }
    }

    // Second pass: property and relation declarations, in document order of
    // the declaring type triple.
    build_declarations(triples, graph);

    // Third pass: membership annotations, applied once declarations exist.
    for (const Triple& triple : triples) {
      if (!matches(triple.predicate, "swes:membership", kSwesMembership)) continue;
      double mu = parse_membership_literal(triple.object);
      ElementName element = local_name(triple.subject);
      int touched;
      try {
        touched = graph.set_membership(element, mu);
      } catch (const std::invalid_argument& error) {
        throw ParseError(triple.object.line, triple.object.column, error.what());
      }
      if (touched == 0) {
        throw ParseError(triple.subject.line, triple.subject.column,
                         "membership annotation references undeclared element '" + element + "'");
      }
    }
    return graph;
  }

 private:
  struct PropertyDecl {
    enum class Kind { Datatype, Object } kind;
    TurtleTerm subject;
    std::vector<TurtleTerm> domains;
    std::vector<TurtleTerm> ranges;
    std::size_t order = 0;
  };

  void build_declarations(const std::vector<Triple>& triples, OntologyGraph& graph) {
    std::map<std::string, PropertyDecl> decls;  // keyed by local name
    struct EdgeStatement {
      std::size_t order;
      const Triple* triple;
      const PropertyDecl* decl;  // null for subClassOf / equivalentClass
      std::string fixed_label;
    };
    std::vector<EdgeStatement> edges;

    for (std::size_t i = 0; i < triples.size(); ++i) {
      const Triple& triple = triples[i];
      const TurtleTerm& pred = triple.predicate;
      if (is_type_predicate(pred)) {
        if (matches(triple.object, "owl:Class", kOwlClass)) continue;
        PropertyDecl::Kind kind;
        if (matches(triple.object, "owl:DatatypeProperty", kOwlDatatypeProperty)) {
          kind = PropertyDecl::Kind::Datatype;
        } else if (matches(triple.object, "owl:ObjectProperty", kOwlObjectProperty)) {
          kind = PropertyDecl::Kind::Object;
        } else {
          throw ParseError(triple.object.line, triple.object.column,
                           "unsupported type '" + triple.object.text + "'");
        }
        std::string name = local_name(triple.subject);
        auto [it, inserted] = decls.try_emplace(name);
        if (!inserted) {
          throw ParseError(triple.subject.line, triple.subject.column,
                           "duplicate property declaration: '" + name + "'");
        }
        it->second.kind = kind;
        it->second.subject = triple.subject;
        it->second.order = i;
        if (kind == PropertyDecl::Kind::Object) {
          edges.push_back({i, &triple, &it->second, {}});
        }
      } else if (matches(pred, "rdfs:domain", kRdfsDomain)) {
        find_decl(decls, triple)->domains.push_back(triple.object);
      } else if (matches(pred, "rdfs:range", kRdfsRange)) {
        find_decl(decls, triple)->ranges.push_back(triple.object);
      } else if (matches(pred, "rdfs:subClassOf", kRdfsSubClassOf)) {
        edges.push_back({i, &triple, nullptr, "subClassOf"});
      } else if (matches(pred, "owl:equivalentClass", kOwlEquivalentClass)) {
        edges.push_back({i, &triple, nullptr, "equivalentClass"});
      } else if (matches(pred, "swes:membership", kSwesMembership)) {
        continue;  // handled in the annotation pass
      } else {
        throw ParseError(pred.line, pred.column, "unsupported predicate '" + pred.text + "'");
      }
    }

    // Datatype properties attach in declaration order.
    std::vector<const PropertyDecl*> datatype_decls;
    for (const auto& [name, decl] : decls) {
      if (decl.kind == PropertyDecl::Kind::Datatype) datatype_decls.push_back(&decl);
    }
    std::sort(datatype_decls.begin(), datatype_decls.end(),
              [](const PropertyDecl* a, const PropertyDecl* b) { return a->order < b->order; });
    for (const PropertyDecl* decl : datatype_decls) {
      if (decl->domains.size() != 1 || !decl->ranges.empty()) {
        throw ParseError(decl->subject.line, decl->subject.column,
                         "datatype property '" + local_name(decl->subject) +
                             "' needs exactly one rdfs:domain and no rdfs:range");
      }
      add_checked(graph, decl->domains[0], [&](const ElementName& domain) {
        graph.add_property(domain, local_name(decl->subject));
      });
    }

    // Relation edges interleave object properties with hierarchy statements
    // by document position.
    std::sort(edges.begin(), edges.end(),
              [](const EdgeStatement& a, const EdgeStatement& b) { return a.order < b.order; });
    for (const EdgeStatement& edge : edges) {
      if (edge.decl != nullptr) {
        if (edge.decl->domains.size() != 1 || edge.decl->ranges.size() != 1) {
          throw ParseError(edge.decl->subject.line, edge.decl->subject.column,
                           "object property '" + local_name(edge.decl->subject) +
                               "' needs exactly one rdfs:domain and one rdfs:range");
        }
        const TurtleTerm& domain = edge.decl->domains[0];
        const TurtleTerm& range = edge.decl->ranges[0];
        add_checked(graph, domain, [&](const ElementName& source) {
          add_checked(graph, range, [&](const ElementName& target) {
            graph.add_relation(source, target, local_name(edge.decl->subject));
          });
        });
      } else {
        add_checked(graph, edge.triple->subject, [&](const ElementName& source) {
          add_checked(graph, edge.triple->object, [&](const ElementName& target) {
            graph.add_relation(source, target, edge.fixed_label);
          });
        });
      }
    }
  }

  PropertyDecl* find_decl(std::map<std::string, PropertyDecl>& decls, const Triple& triple) {
    auto it = decls.find(local_name(triple.subject));
    if (it == decls.end()) {
      throw ParseError(triple.subject.line, triple.subject.column,
                       "'" + triple.subject.text + "' has rdfs:domain/rdfs:range but no " +
                           "owl:DatatypeProperty or owl:ObjectProperty declaration");
    }
    return &it->second;
  }

  template <typename Fn>
  void add_checked(OntologyGraph& graph, const TurtleTerm& term, Fn&& fn) {
    try {
      fn(local_name(term));
    } catch (const std::invalid_argument& error) {
      throw ParseError(term.line, term.column, error.what());
    }
  }

  double parse_membership_literal(const TurtleTerm& object) {
    if (object.kind != TurtleTerm::Kind::Literal) {
      throw ParseError(object.line, object.column, "swes:membership expects a quoted decimal");
    }
    if (!object.datatype.empty() && object.datatype != "xsd:decimal" &&
        object.datatype != kXsdDecimal) {
      throw ParseError(object.line, object.column,
                       "unsupported literal datatype '" + object.datatype + "'");
    }
    const char* begin = object.text.c_str();
    char* end = nullptr;
    double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
      throw ParseError(object.line, object.column, "invalid decimal '" + object.text + "'");
    }
    if (!(value >= 0.0 && value <= 1.0)) {
      throw ParseError(object.line, object.column,
                       "membership annotation " + object.text + " outside [0,1]");
    }
    return value;
  }

  bool is_type_predicate(const TurtleTerm& term) const {
    return term.kind == TurtleTerm::Kind::Keyword || matches(term, "rdf:type", kRdfType);
  }

  // A term matches a vocabulary entry by its conventional prefixed form or
  // by its fully expanded IRI.
  bool matches(const TurtleTerm& term, std::string_view pname, std::string_view iri) const {
    if (term.kind == TurtleTerm::Kind::Iri) return term.text == iri;
    if (term.kind != TurtleTerm::Kind::PrefixedName) return false;
    if (term.text == pname) return true;
    auto colon = term.text.find(':');
    if (colon == std::string::npos) return false;
    auto it = prefixes_.find(term.text.substr(0, colon));
    if (it == prefixes_.end()) return false;
    return it->second + term.text.substr(colon + 1) == iri;
  }

  ElementName local_name(const TurtleTerm& term) const {
    std::string iri;
    if (term.kind == TurtleTerm::Kind::Iri) {
      iri = term.text;
    } else if (term.kind == TurtleTerm::Kind::PrefixedName) {
      auto colon = term.text.find(':');
      if (colon == std::string::npos) {
        throw ParseError(term.line, term.column, "expected an IRI or prefixed name");
      }
      auto it = prefixes_.find(term.text.substr(0, colon));
      if (it == prefixes_.end()) {
        throw ParseError(term.line, term.column,
                         "undeclared prefix '" + term.text.substr(0, colon) + ":'");
      }
      iri = it->second + term.text.substr(colon + 1);
    } else {
      throw ParseError(term.line, term.column, "expected an IRI or prefixed name");
    }
    auto cut = iri.find_last_of("#/");
    std::string local = cut == std::string::npos ? iri : iri.substr(cut + 1);
    try {
      return make_element_name(local);
    } catch (const std::invalid_argument&) {
      throw ParseError(term.line, term.column, "IRI <" + iri + "> has an empty local name");
    }
  }

  std::map<std::string, std::string> prefixes_;
};

// --- JSON interchange ------------------------------------------------------

inline double json_mu(const nlohmann::json& item, const std::string& where) {
  if (!item.contains("mu")) return 1.0;
  const nlohmann::json& mu = item.at("mu");
  if (!mu.is_number()) throw ParseError(where + ": \"mu\" must be a number");
  double value = mu.get<double>();
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ParseError(where + ": membership " + mu.dump() + " outside [0,1]");
  }
  return value;
}

inline std::string json_string(const nlohmann::json& item, const char* key,
                               const std::string& where) {
  if (!item.contains(key)) throw ParseError(where + ": missing key \"" + key + "\"");
  const nlohmann::json& value = item.at(key);
  if (!value.is_string()) throw ParseError(where + ": \"" + key + "\" must be a string");
  return value.get<std::string>();
}

inline void reject_unknown_keys(const nlohmann::json& object,
                                std::initializer_list<std::string_view> known,
                                const std::string& where) {
  for (const auto& [key, value] : object.items()) {
    bool ok = false;
    for (std::string_view k : known) {
      if (key == k) {
        ok = true;
        break;
      }
    }
    if (!ok) throw ParseError(where + ": unknown key \"" + key + "\"");
  }
}

inline OntologyGraph parse_json_interchange(std::string_view text, std::string source_id) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& error) {
    throw ParseError(error.what());
  }
  if (!doc.is_object()) throw ParseError("document: expected a top-level object");
  reject_unknown_keys(doc, {"classes", "properties", "relations"}, "document");

  OntologyGraph graph;
  graph.source_id = std::move(source_id);

  auto array_of = [&](const char* key) -> nlohmann::json {
    if (!doc.contains(key)) return nlohmann::json::array();
    if (!doc.at(key).is_array()) {
      throw ParseError(std::string("document: \"") + key + "\" must be an array");
    }
    return doc.at(key);
  };

  std::size_t index = 0;
  for (const nlohmann::json& item : array_of("classes")) {
    std::string where = "classes[" + std::to_string(index++) + "]";
    if (!item.is_object()) throw ParseError(where + ": expected an object");
    reject_unknown_keys(item, {"name", "mu"}, where);
    try {
      if (!graph.add_class(json_string(item, "name", where), json_mu(item, where))) {
        throw ParseError(where + ": duplicate class");
      }
    } catch (const std::invalid_argument& error) {
      throw ParseError(where + ": " + error.what());
    }
  }
  index = 0;
  for (const nlohmann::json& item : array_of("properties")) {
    std::string where = "properties[" + std::to_string(index++) + "]";
    if (!item.is_object()) throw ParseError(where + ": expected an object");
    reject_unknown_keys(item, {"class", "name", "mu"}, where);
    try {
      graph.add_property(json_string(item, "class", where), json_string(item, "name", where),
                         json_mu(item, where));
    } catch (const std::invalid_argument& error) {
      throw ParseError(where + ": " + error.what());
    }
  }
  index = 0;
  for (const nlohmann::json& item : array_of("relations")) {
    std::string where = "relations[" + std::to_string(index++) + "]";
    if (!item.is_object()) throw ParseError(where + ": expected an object");
    reject_unknown_keys(item, {"source", "target", "label", "mu"}, where);
    try {
      graph.add_relation(json_string(item, "source", where), json_string(item, "target", where),
                         json_string(item, "label", where), json_mu(item, where));
    } catch (const std::invalid_argument& error) {
      throw ParseError(where + ": " + error.what());
    }
  }
  return graph;
}

}  // namespace detail

inline OntologyGraph parse_ontology(std::string_view document, OntologyFormat format,
                                    std::string source_id = {}) {
  if (format == OntologyFormat::TurtleSubset) {
    return detail::TurtleDocumentBuilder{}.build(document, std::move(source_id));
  }
  return detail::parse_json_interchange(document, std::move(source_id));
}

// Canonical interchange form; parsing it back reproduces the graph element
// for element, membership for membership.
inline std::string ontology_to_json(const OntologyGraph& graph) {
  nlohmann::ordered_json doc;
  doc["classes"] = nlohmann::ordered_json::array();
  doc["properties"] = nlohmann::ordered_json::array();
  doc["relations"] = nlohmann::ordered_json::array();
  for (const WeightedName& cls : graph.classes()) {
    doc["classes"].push_back({{"name", cls.name}, {"mu", cls.mu}});
    for (const WeightedName& prop : graph.properties_of(cls.name)) {
      doc["properties"].push_back({{"class", cls.name}, {"name", prop.name}, {"mu", prop.mu}});
    }
  }
  for (const RelationEdge& edge : graph.relations()) {
    doc["relations"].push_back({{"source", edge.source},
                                {"target", edge.target},
                                {"label", edge.label},
                                {"mu", edge.mu}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace swes
