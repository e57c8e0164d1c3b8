#include "qwalk/table.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "qwalk/errors.hpp"
#include "qwalk/version.hpp"

namespace qwalk::io {

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string dat_token(std::string s) {
    for (char& c : s)
        if (c == ' ' || c == '\t' || c == '\n') c = '_';
    return s.empty() ? "-" : s;
}

std::vector<std::string> expanded_header(const Table& table) {
    std::vector<std::string> header;
    const std::vector<Cell>* first = table.rows.empty() ? nullptr : &table.rows.front();
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        const auto* vec = first ? std::get_if<std::vector<double>>(&(*first)[c]) : nullptr;
        if (vec) {
            for (std::size_t i = 0; i < vec->size(); ++i) header.push_back(table.columns[c] + "_" + std::to_string(i));
        } else {
            header.push_back(table.columns[c]);
        }
    }
    return header;
}

void append_cell(std::vector<std::string>& fields, const Cell& cell, bool csv) {
    if (const auto* i = std::get_if<std::int64_t>(&cell)) {
        fields.push_back(std::to_string(*i));
    } else if (const auto* d = std::get_if<double>(&cell)) {
        fields.push_back(format_double(*d));
    } else if (const auto* s = std::get_if<std::string>(&cell)) {
        fields.push_back(csv ? csv_escape(*s) : dat_token(*s));
    } else {
        for (double v : std::get<std::vector<double>>(cell)) fields.push_back(format_double(v));
    }
}

Json cell_json(const Cell& cell) {
    if (const auto* i = std::get_if<std::int64_t>(&cell)) return *i;
    if (const auto* d = std::get_if<double>(&cell)) return std::isfinite(*d) ? Json(*d) : Json(format_double(*d));
    if (const auto* s = std::get_if<std::string>(&cell)) return *s;
    Json arr = Json::array();
    for (double v : std::get<std::vector<double>>(cell)) arr.push_back(v);
    return arr;
}

} // namespace

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size())
        throw InvalidArgument("table row has " + std::to_string(row.size()) + " cells, expected " +
                              std::to_string(columns.size()));
    rows.push_back(std::move(row));
}

Format parse_format(const std::string& name) {
    if (name == "csv") return Format::Csv;
    if (name == "json") return Format::Json;
    if (name == "dat") return Format::Dat;
    throw InvalidArgument("unknown output format '" + name + "' (csv, json, dat)");
}

const char* extension(Format format) noexcept {
    switch (format) {
    case Format::Csv: return "csv";
    case Format::Json: return "json";
    case Format::Dat: return "dat";
    }
    return "txt";
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

void write_document(std::ostream& out, const Document& doc, Format format) {
    if (format == Format::Json) {
        Json root;
        root["version"] = kVersion;
        root["config"] = doc.config;
        Json rows = Json::array();
        for (const auto& row : doc.table.rows) {
            Json obj = Json::object();
            for (std::size_t c = 0; c < doc.table.columns.size(); ++c) obj[doc.table.columns[c]] = cell_json(row[c]);
            rows.push_back(std::move(obj));
        }
        root["rows"] = std::move(rows);
        root["summary"] = doc.summary;
        root["warnings"] = doc.warnings;
        out << root.dump(1) << '\n';
        return;
    }

    const bool csv = format == Format::Csv;
    out << "# qwalk " << kVersion << '\n';
    out << "# config " << doc.config.dump() << '\n';
    out << "# summary " << doc.summary.dump() << '\n';
    for (const auto& w : doc.warnings) out << "# warning " << w << '\n';

    const auto header = expanded_header(doc.table);
    const char* sep = csv ? "," : " ";
    out << (csv ? "" : "# ");
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? sep : "") << (csv ? csv_escape(header[i]) : header[i]);
    out << '\n';
    std::vector<std::string> fields;
    for (const auto& row : doc.table.rows) {
        fields.clear();
        for (const auto& cell : row) append_cell(fields, cell, csv);
        for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? sep : "") << fields[i];
        out << '\n';
    }
}

} // namespace qwalk::io
