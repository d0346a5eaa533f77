#pragma once

#include <string>
#include <variant>
#include <vector>

namespace lanemden {

// Shortest %g rendering with the given number of significant digits.
std::string format_double(double v, int digits);

using Cell = std::variant<std::string, double, long long>;

class Table {
 public:
  explicit Table(std::vector<std::string> headers);

  void add_row(std::vector<Cell> row);
  std::size_t rows() const noexcept { return rows_.size(); }

  // Machine table: comma separated, 17 significant digits.
  std::string to_csv() const;
  // Human table: aligned columns, 6 significant digits.
  std::string to_text() const;

 private:
  std::vector<std::string> headers_;
  std::vector<std::vector<Cell>> rows_;
};

}  // namespace lanemden
