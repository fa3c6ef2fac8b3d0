#include "citenet/csv.hpp"

#include <istream>

#include "citenet/error.hpp"

namespace citenet::csv {

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void Table::add_row(const std::vector<std::string>& fields) {
    if (fields.size() != header_.size()) throw std::invalid_argument("CSV row width does not match header");
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) body_ += ',';
        body_ += escape(fields[i]);
    }
    body_ += '\n';
    ++rows_;
}

std::string Table::str() const {
    std::string out;
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (i) out += ',';
        out += escape(header_[i]);
    }
    out += '\n';
    return out + body_;
}

std::vector<Row> read(std::istream& in) {
    std::vector<Row> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        Row row;
        std::string field;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char c = line[i];
            if (quoted) {
                if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else if (c == '"') {
                    quoted = false;
                } else {
                    field += c;
                }
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                row.push_back(std::move(field));
                field.clear();
            } else {
                field += c;
            }
        }
        if (quoted) throw SchemaError("unterminated quoted CSV field");
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace citenet::csv
