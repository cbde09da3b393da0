#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace emw::harness {

// Row-major numeric table with named columns.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t width() const { return columns_.size(); }
  std::size_t rows() const { return width() ? data_.size() / width() : 0; }
  double at(std::size_t row, std::size_t col) const { return data_[row * width() + col]; }
  std::size_t column_index(const std::string& name) const;

  void resize_rows(std::size_t rows) { data_.assign(rows * width(), 0.0); }
  double* row(std::size_t r) { return data_.data() + r * width(); }
  void append(const std::vector<double>& row);

 private:
  std::vector<std::string> columns_;
  std::vector<double> data_;
};

// Fixed formatting: %.17g, '\n' line ends, header line first.
std::string to_csv(const Table& table);

// Writes through a temporary file in the same directory, then renames.
void write_atomic(const std::filesystem::path& path, const std::string& content);

// <stem>.csv plus <stem>.json with the metadata and column list.
void write_dataset(const std::filesystem::path& dir, const std::string& stem, const Table& table,
                   nlohmann::json metadata);

}  // namespace emw::harness
