#include "causal/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace causal {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(trim(cur));
    return fields;
}

}  // namespace

void DataTable::add_column(const std::string& name, std::vector<double> values) {
    if (name.empty()) throw std::invalid_argument("column name must not be empty");
    if (has_column(name)) throw std::invalid_argument("duplicate column name: " + name);
    if (!columns_.empty() && values.size() != row_count()) {
        throw std::invalid_argument("column " + name + " has " + std::to_string(values.size()) +
                                    " rows, table has " + std::to_string(row_count()));
    }
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite value in column " + name);
    }
    names_.push_back(name);
    columns_.push_back(std::move(values));
}

bool DataTable::has_column(const std::string& name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

size_t DataTable::column_index(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw std::invalid_argument("unknown column: " + name);
    return static_cast<size_t>(it - names_.begin());
}

const std::vector<double>& DataTable::column(const std::string& name) const {
    return columns_[column_index(name)];
}

DataTable DataTable::select_rows(const std::vector<size_t>& rows) const {
    DataTable out;
    const size_t n = row_count();
    for (size_t c = 0; c < columns_.size(); ++c) {
        std::vector<double> vals;
        vals.reserve(rows.size());
        for (size_t r : rows) {
            if (r >= n) throw std::out_of_range("row index out of range");
            vals.push_back(columns_[c][r]);
        }
        out.add_column(names_[c], std::move(vals));
    }
    return out;
}

DataTable DataTable::with_column(const std::string& name, std::vector<double> values) const {
    DataTable out;
    const size_t idx = column_index(name);
    if (values.size() != row_count()) {
        throw std::invalid_argument("replacement for " + name + " has wrong length");
    }
    for (size_t c = 0; c < columns_.size(); ++c) {
        out.add_column(names_[c], c == idx ? std::move(values) : columns_[c]);
    }
    return out;
}

DataTable DataTable::read_csv(std::istream& in, const std::string& origin) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(origin + ": empty file, expected a header row");
    // Tolerate a UTF-8 byte-order mark.
    if (line.size() >= 3 && line.compare(0, 3, "\xef\xbb\xbf") == 0) line.erase(0, 3);

    const std::vector<std::string> header = split_csv_line(line);
    std::vector<std::vector<double>> cols(header.size());

    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": expected " +
                                     std::to_string(header.size()) + " fields, got " +
                                     std::to_string(fields.size()));
        }
        for (size_t c = 0; c < fields.size(); ++c) {
            double v = 0.0;
            const char* b = fields[c].data();
            const char* e = b + fields[c].size();
            auto [p, ec] = std::from_chars(b, e, v);
            if (ec != std::errc() || p != e || !std::isfinite(v)) {
                throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": bad numeric value '" +
                                         fields[c] + "' in column " + header[c]);
            }
            cols[c].push_back(v);
        }
    }

    DataTable out;
    for (size_t c = 0; c < header.size(); ++c) out.add_column(header[c], std::move(cols[c]));
    if (out.row_count() == 0) throw std::runtime_error(origin + ": no data rows");
    return out;
}

DataTable DataTable::read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_csv(in, path);
}

void DataTable::write_csv(std::ostream& out) const {
    for (size_t c = 0; c < names_.size(); ++c) out << (c ? "," : "") << names_[c];
    out << "\n";
    char buf[40];
    for (size_t r = 0; r < row_count(); ++r) {
        for (size_t c = 0; c < columns_.size(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", columns_[c][r]);
            out << (c ? "," : "") << buf;
        }
        out << "\n";
    }
}

void DataTable::write_csv_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_csv(out);
}

}  // namespace causal
