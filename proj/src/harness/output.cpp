#include "emw/harness/output.hpp"

#include <cstdio>
#include <fstream>

#include "emw/error.hpp"

namespace emw::harness {

std::size_t Table::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i] == name) return i;
  }
  throw Error(ErrorCode::InvalidArgument, "no column named " + name);
}

void Table::append(const std::vector<double>& row) {
  if (row.size() != width()) throw Error(ErrorCode::InvalidArgument, "row width does not match the header");
  data_.insert(data_.end(), row.begin(), row.end());
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.width(); ++c) {
    if (c) out += ',';
    out += table.columns()[c];
  }
  out += '\n';
  char buf[32];
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.width(); ++c) {
      if (c) out += ',';
      const int len = std::snprintf(buf, sizeof buf, "%.17g", table.at(r, c));
      out.append(buf, static_cast<std::size_t>(len));
    }
    out += '\n';
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorCode::IoError, "cannot rename into " + path.string() + ": " + ec.message());
  }
}

void write_dataset(const std::filesystem::path& dir, const std::string& stem, const Table& table,
                   nlohmann::json metadata) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
  metadata["columns"] = table.columns();
  metadata["rows"] = table.rows();
  write_atomic(dir / (stem + ".csv"), to_csv(table));
  write_atomic(dir / (stem + ".json"), metadata.dump(2) + "\n");
}

}  // namespace emw::harness
