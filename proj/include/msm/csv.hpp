#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "msm/errors.hpp"

namespace msm {

// Shortest decimal string that round-trips a double. Locale-independent,
// so identical inputs always give identical bytes.
inline std::string csv_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// Row-oriented table with a fixed header. Cells are written verbatim;
// commas, quotes, and newlines are rejected rather than escaped because
// no scenario emits free-form text.
class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
        if (header_.empty())
            throw PreconditionError("CsvTable: header must not be empty");
        for (const auto& h : header_)
            check_cell(h);
    }

    void add_row(std::vector<std::string> cells) {
        if (cells.size() != header_.size())
            throw PreconditionError("CsvTable: row width does not match the header");
        for (const auto& c : cells)
            check_cell(c);
        rows_.push_back(std::move(cells));
    }

    void add_row(const std::vector<double>& values) {
        std::vector<std::string> cells;
        cells.reserve(values.size());
        for (double v : values)
            cells.push_back(csv_number(v));
        add_row(std::move(cells));
    }

    std::size_t row_count() const { return rows_.size(); }

    std::string str() const {
        std::string out = join(header_);
        for (const auto& row : rows_)
            out += join(row);
        return out;
    }

    void write(const std::filesystem::path& path) const {
        std::ofstream file(path, std::ios::binary);
        if (!file)
            throw ConfigError("CsvTable: cannot open " + path.string() + " for writing");
        const std::string body = str();
        file.write(body.data(), static_cast<std::streamsize>(body.size()));
        if (!file)
            throw ConfigError("CsvTable: write failed for " + path.string());
    }

  private:
    static void check_cell(const std::string& c) {
        if (c.find_first_of(",\"\n\r") != std::string::npos)
            throw PreconditionError("CsvTable: cell contains a delimiter or newline");
    }

    static std::string join(const std::vector<std::string>& cells) {
        std::string line;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i)
                line += ',';
            line += cells[i];
        }
        line += '\n';
        return line;
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

} // namespace msm
