#include "ptone/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ptone/errors.hpp"

namespace ptone::csv {

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

void Table::add(const Key& key, std::vector<std::string> row) {
  if (!header.empty() && row.size() != header.size()) throw InvalidInput("CSV row width does not match the header");
  rows.emplace_back(key, std::move(row));
}

namespace {

void write_line(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << quote(fields[i]);
  }
  os << "\r\n";
}

}  // namespace

std::string Table::body() const {
  std::ostringstream os;
  write_line(os, header);
  auto sorted = rows;
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& r : sorted) write_line(os, r.second);
  return os.str();
}

void Table::write(std::ostream& os) const {
  for (const auto& line : metadata) os << "# " << line << "\r\n";
  os << body();
}

std::string Table::str() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

}  // namespace ptone::csv
