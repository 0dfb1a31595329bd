#pragma once

#include <array>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "swes/core.hpp"
#include "swes/ontology.hpp"

namespace swes {

// One table entry: an element name (or the NONE sentinel) with its
// membership degree. The sentinel always carries mu = 1.0.
struct Cell {
  std::string value;
  double mu = 1.0;

  static Cell none() { return {std::string(), 1.0}; }
  bool is_none() const { return value.empty(); }

  friend bool operator==(const Cell&, const Cell&) = default;
};

// One row of the four-attribute table. The Class cell is never NONE.
struct DataRow {
  std::array<Cell, kAttributeCount> cells;
  int row_index = 0;

  const Cell& cell(Attribute attr) const { return cells[static_cast<int>(attr)]; }
  Cell& cell(Attribute attr) { return cells[static_cast<int>(attr)]; }

  friend bool operator==(const DataRow&, const DataRow&) = default;
};

struct DataSet {
  std::vector<DataRow> rows;
  std::string source_id;

  bool empty() const { return rows.empty(); }
  std::size_t size() const { return rows.size(); }
};

// Cross product of a class's properties, incoming labels, and outgoing
// labels. An empty category contributes a single NONE cell, so every class
// yields max(1,|P|) * max(1,|I|) * max(1,|O|) rows. Row order fixes the
// property as the outer loop, then outgoing, then incoming.
inline std::vector<DataRow> extract_class_rows(const OntologyGraph& graph,
                                               const ElementName& cls) {
  CategorizedParts parts = categorize_parts(graph, cls);
  auto cells_for = [](const std::vector<WeightedName>& elements) {
    std::vector<Cell> cells;
    if (elements.empty()) {
      cells.push_back(Cell::none());
    } else {
      cells.reserve(elements.size());
      for (const WeightedName& element : elements) cells.push_back({element.name, element.mu});
    }
    return cells;
  };

  const Cell class_cell{cls, graph.class_mu(cls)};
  const std::vector<Cell> properties = cells_for(parts.properties);
  const std::vector<Cell> incoming = cells_for(parts.incoming);
  const std::vector<Cell> outgoing = cells_for(parts.outgoing);

  std::vector<DataRow> rows;
  rows.reserve(properties.size() * incoming.size() * outgoing.size());
  for (const Cell& property : properties) {
    for (const Cell& out : outgoing) {
      for (const Cell& in : incoming) {
        DataRow row;
        row.cell(Attribute::Class) = class_cell;
        row.cell(Attribute::Property) = property;
        row.cell(Attribute::Incoming) = in;
        row.cell(Attribute::Outgoing) = out;
        row.row_index = static_cast<int>(rows.size()) + 1;
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

// Concatenates every class's rows in declaration order; row indexes run
// 1..n over the whole dataset.
inline DataSet extract_dataset(const OntologyGraph& graph) {
  DataSet dataset;
  dataset.source_id = graph.source_id;
  for (const WeightedName& cls : graph.classes()) {
    for (DataRow& row : extract_class_rows(graph, cls.name)) {
      row.row_index = static_cast<int>(dataset.rows.size()) + 1;
      dataset.rows.push_back(std::move(row));
    }
  }
  return dataset;
}

namespace detail {

inline std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) return value;
  std::string quoted = "\"";
  for (char c : value) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

}  // namespace detail

// NONE serializes as an empty field with mu 1.0; mu is printed with exactly
// six decimal digits.
inline void write_dataset_csv(const DataSet& dataset, std::ostream& out) {
  out << "row,class,class_mu,property,property_mu,incoming,incoming_mu,outgoing,outgoing_mu\n";
  for (const DataRow& row : dataset.rows) {
    out << row.row_index;
    for (Attribute attr : kAllAttributes) {
      const Cell& cell = row.cell(attr);
      out << ',' << detail::csv_field(cell.value) << ',' << format_membership_fixed(cell.mu);
    }
    out << '\n';
  }
}

inline std::string dataset_to_csv(const DataSet& dataset) {
  std::ostringstream out;
  write_dataset_csv(dataset, out);
  return out.str();
}

}  // namespace swes
