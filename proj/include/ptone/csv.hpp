#pragma once

#include <array>
#include <ostream>
#include <string>
#include <vector>

namespace ptone::csv {

/// Shortest round-trip text is not required; 17 significant digits are.
std::string num(double x);
/// RFC 4180 field quoting.
std::string quote(const std::string& field);

/// Rows are kept with a (p, m, c, r) key and written sorted by it.
struct Table {
  using Key = std::array<double, 4>;

  std::vector<std::string> metadata;
  std::vector<std::string> header;
  std::vector<std::pair<Key, std::vector<std::string>>> rows;

  void add(const Key& key, std::vector<std::string> row);
  void write(std::ostream& os) const;
  [[nodiscard]] std::string str() const;
  /// Everything after the metadata lines.
  [[nodiscard]] std::string body() const;
};

}  // namespace ptone::csv
