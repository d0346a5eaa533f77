#include "lanemden/table.hpp"

#include <algorithm>
#include <cstdio>

#include "lanemden/errors.hpp"

namespace lanemden {
namespace {

std::string render(const Cell& c, int digits) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return format_double(std::get<double>(c), digits);
}

}  // namespace

std::string format_double(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

Table::Table(std::vector<std::string> headers) : headers_(std::move(headers)) {}

void Table::add_row(std::vector<Cell> row) {
  require(row.size() == headers_.size(), ErrorCode::InvalidArgument, "row width does not match the header");
  rows_.push_back(std::move(row));
}

std::string Table::to_csv() const {
  std::string out;
  for (std::size_t j = 0; j < headers_.size(); ++j) out += (j ? "," : "") + headers_[j];
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t j = 0; j < row.size(); ++j) out += (j ? "," : "") + render(row[j], 17);
    out += '\n';
  }
  return out;
}

std::string Table::to_text() const {
  std::vector<std::vector<std::string>> cells{headers_};
  for (const auto& row : rows_) {
    std::vector<std::string> r;
    for (const auto& c : row) r.push_back(render(c, 6));
    cells.push_back(std::move(r));
  }
  std::vector<std::size_t> width(headers_.size(), 0);
  for (const auto& r : cells)
    for (std::size_t j = 0; j < r.size(); ++j) width[j] = std::max(width[j], r[j].size());
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t j = 0; j < cells[i].size(); ++j) {
      out += cells[i][j];
      if (j + 1 < cells[i].size()) out += std::string(width[j] - cells[i][j].size() + 2, ' ');
    }
    out += '\n';
    if (i == 0) {
      for (std::size_t j = 0; j < width.size(); ++j) out += std::string(width[j], '-') + (j + 1 < width.size() ? "  " : "");
      out += '\n';
    }
  }
  return out;
}

}  // namespace lanemden
