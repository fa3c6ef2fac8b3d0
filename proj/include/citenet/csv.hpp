#pragma once

#include <cstdio>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace citenet::csv {

// Shortest round-trippable-enough form; fixed so reruns are byte-identical.
inline std::string number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

std::string escape(std::string_view field);

// Accumulates rows in memory; nothing touches the filesystem until the caller
// writes `str()` out.
class Table {
public:
    explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(const std::vector<std::string>& fields);

    std::size_t rows() const { return rows_; }
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::string body_;
    std::size_t rows_ = 0;
};

using Row = std::vector<std::string>;

// RFC 4180 subset: comma separated, double-quoted fields with "" escapes,
// no embedded newlines.
std::vector<Row> read(std::istream& in);

}  // namespace citenet::csv
