// SPDX-License-Identifier: Apache-2.0

#include "fakepath/table.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace fakepath::table {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

ExperimentTable::ExperimentTable(std::vector<std::string> columns)
    : columns_(std::move(columns)) {}

void ExperimentTable::add_metadata(const std::string& key, const std::string& value) {
  metadata_.emplace_back(key, value);
}

void ExperimentTable::add_metadata(const std::string& key, double value) {
  metadata_.emplace_back(key, format_number(value));
}

ExperimentTable::RowBuilder& ExperimentTable::RowBuilder::num(double v) {
  cells_.push_back(format_number(v));
  return *this;
}

ExperimentTable::RowBuilder& ExperimentTable::RowBuilder::text(std::string v) {
  cells_.push_back(std::move(v));
  return *this;
}

void ExperimentTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size()) {
    throw std::invalid_argument("ExperimentTable: row width does not match column count");
  }
  rows_.push_back(std::move(cells));
}

std::string ExperimentTable::to_csv() const {
  std::string out;
  for (const auto& [k, v] : metadata_) {
    out += "# ";
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i > 0) out += ',';
    out += columns_[i];
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

}  // namespace fakepath::table
