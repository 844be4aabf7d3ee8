#ifndef MGATE_TABLE_H
#define MGATE_TABLE_H

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace mgate {

using Cell = std::variant<double, std::int64_t, std::string, bool>;

/// Homogeneous rows under a fixed header.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    /// Throws std::invalid_argument if the row width differs from the header.
    void add_row(std::vector<Cell> row);
};

enum class TableFormat { Csv, Json };

const char *to_string(TableFormat f);
std::optional<TableFormat> parse_table_format(const std::string &name);

/// CSV: header line, RFC-4180 quoting, CRLF-free '\n' line ends, shortest
/// round-trip doubles. JSON: array of objects with keys in column order.
/// Non-finite doubles are written as the strings "nan", "inf", "-inf".
std::string emit_table(const Table &t, TableFormat format);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

}  // namespace mgate

#endif
