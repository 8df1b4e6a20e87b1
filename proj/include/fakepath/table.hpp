// SPDX-License-Identifier: Apache-2.0
//
// Rectangular result tables with a metadata block, serialized as CSV.
// Numbers are formatted with 12 significant digits so identical runs produce
// byte-identical files.

#pragma once

#include <string>
#include <utility>
#include <vector>

namespace fakepath::table {

/// Deterministic numeric formatting (12 significant digits, "nan"/"inf").
std::string format_number(double v);

class ExperimentTable {
 public:
  ExperimentTable() = default;
  explicit ExperimentTable(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  const std::vector<std::pair<std::string, std::string>>& metadata() const { return metadata_; }

  void add_metadata(const std::string& key, const std::string& value);
  void add_metadata(const std::string& key, double value);

  class RowBuilder {
   public:
    explicit RowBuilder(std::size_t expected) { cells_.reserve(expected); }
    RowBuilder& num(double v);
    RowBuilder& text(std::string v);
    std::vector<std::string> take() { return std::move(cells_); }

   private:
    std::vector<std::string> cells_;
  };

  void add_row(std::vector<std::string> cells);

  /// Metadata lines ("# key=value"), then the header, then the rows.
  std::string to_csv() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::pair<std::string, std::string>> metadata_;
};

}  // namespace fakepath::table
