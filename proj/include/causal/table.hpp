#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace causal {

// Column-major table of named real-valued columns. All columns have equal
// length, names are unique and every entry is finite; violations throw.
class DataTable {
public:
    DataTable() = default;

    void add_column(const std::string& name, std::vector<double> values);

    size_t row_count() const { return columns_.empty() ? 0 : columns_.front().size(); }
    size_t column_count() const { return columns_.size(); }
    bool empty() const { return columns_.empty(); }

    bool has_column(const std::string& name) const;
    const std::vector<double>& column(const std::string& name) const;
    const std::vector<double>& column(size_t idx) const { return columns_.at(idx); }
    const std::vector<std::string>& names() const { return names_; }
    size_t column_index(const std::string& name) const;

    // New table with the given rows (indices may repeat, e.g. bootstrap).
    DataTable select_rows(const std::vector<size_t>& rows) const;

    // Copy with one column's values replaced.
    DataTable with_column(const std::string& name, std::vector<double> values) const;

    // CSV with a mandatory header row. Malformed rows are reported with
    // their 1-based line number.
    static DataTable read_csv(std::istream& in, const std::string& origin = "<stream>");
    static DataTable read_csv_file(const std::string& path);
    void write_csv(std::ostream& out) const;
    void write_csv_file(const std::string& path) const;

private:
    std::vector<std::string> names_;
    std::vector<std::vector<double>> columns_;
};

}  // namespace causal
