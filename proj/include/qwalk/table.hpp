#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace qwalk::io {

using Json = nlohmann::ordered_json;

/// A vector cell expands to columns name_0, name_1, ... in csv/dat output.
using Cell = std::variant<std::int64_t, double, std::string, std::vector<double>>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
};

enum class Format { Csv, Json, Dat };

Format parse_format(const std::string& name);
const char* extension(Format format) noexcept;

struct Document {
    Json config;
    Table table;
    Json summary = Json::object();
    std::vector<std::string> warnings;
};

/// csv/dat: leading '#' lines carry the version, config, summary and warnings, then a
/// header and the rows. json: one object with version, config, rows, summary, warnings.
void write_document(std::ostream& out, const Document& doc, Format format);

/// Shortest-round-trip decimal text, '.' separator, locale independent.
std::string format_double(double value);

} // namespace qwalk::io
