#include "mgate/table.h"

#include <array>
#include <charconv>
#include <cmath>
#include "json.hpp"
#include <stdexcept>

namespace mgate {

namespace {

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

std::string cell_text(const Cell &c) {
    return std::visit(
        [](const auto &v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                return format_double(v);
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                return std::to_string(v);
            } else if constexpr (std::is_same_v<T, bool>) {
                return v ? "true" : "false";
            } else {
                return v;
            }
        },
        c);
}

nlohmann::ordered_json cell_json(const Cell &c) {
    return std::visit(
        [](const auto &v) -> nlohmann::ordered_json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                if (!std::isfinite(v)) {
                    return format_double(v);
                }
                return v;
            } else {
                return v;
            }
        },
        c);
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw std::invalid_argument("row width does not match table header");
    }
    rows.push_back(std::move(row));
}

const char *to_string(TableFormat f) {
    return f == TableFormat::Csv ? "csv" : "json";
}

std::optional<TableFormat> parse_table_format(const std::string &name) {
    if (name == "csv") {
        return TableFormat::Csv;
    }
    if (name == "json") {
        return TableFormat::Json;
    }
    return std::nullopt;
}

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::string emit_table(const Table &t, TableFormat format) {
    if (format == TableFormat::Json) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto &row : t.rows) {
            nlohmann::ordered_json obj = nlohmann::ordered_json::object();
            for (std::size_t j = 0; j < t.columns.size(); ++j) {
                obj[t.columns[j]] = cell_json(row.at(j));
            }
            arr.push_back(std::move(obj));
        }
        return arr.dump(2) + "\n";
    }
    std::string out;
    for (std::size_t j = 0; j < t.columns.size(); ++j) {
        out += (j ? "," : "") + csv_field(t.columns[j]);
    }
    out += '\n';
    for (const auto &row : t.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            out += (j ? "," : "") + csv_field(cell_text(row[j]));
        }
        out += '\n';
    }
    return out;
}

}  // namespace mgate
