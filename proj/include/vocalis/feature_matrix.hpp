// Copyright 2026 The Vocalis Authors
//
// Licensed under the Apache License, Version 2.0
//
// The feature matrix (rows = files, columns = named features), column-mean
// imputation, and RFC 4180 CSV serialization. Floats are written with 17
// significant digits so a write/parse round trip is exact.

#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "vocalis/errors.hpp"
#include "vocalis/waveform.hpp"

namespace vocalis {

struct FeatureMatrix {
    std::vector<std::string> row_ids;      // input file identifiers
    std::vector<std::string> column_names; // ordered feature names
    std::vector<double> cells;             // row-major; kMissing for empty

    std::size_t rows() const { return row_ids.size(); }
    std::size_t cols() const { return column_names.size(); }
    double& at(std::size_t row, std::size_t col) { return cells[row * cols() + col]; }
    double at(std::size_t row, std::size_t col) const { return cells[row * cols() + col]; }
};

/// Replace each missing cell with the mean of its column's non-missing cells.
/// Columns that are entirely missing are filled with 0 and reported.
inline FeatureMatrix impute_column_means(const FeatureMatrix& m,
                                         std::vector<std::string>* all_missing_columns = nullptr) {
    FeatureMatrix out = m;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            const double v = m.at(r, c);
            if (!is_missing(v)) {
                sum += v;
                ++count;
            }
        }
        if (count == 0) {
            for (std::size_t r = 0; r < m.rows(); ++r) out.at(r, c) = 0.0;
            if (all_missing_columns) all_missing_columns->push_back(m.column_names[c]);
            continue;
        }
        const double mean = sum / static_cast<double>(count);
        for (std::size_t r = 0; r < m.rows(); ++r)
            if (is_missing(out.at(r, c))) out.at(r, c) = mean;
    }
    return out;
}

namespace csv {

inline std::string escape_field(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += "\"\"";
        else out += ch;
    }
    out += '"';
    return out;
}

inline std::string format_value(double v) {
    if (is_missing(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Split one CSV record into fields. Handles quoted fields with embedded
/// commas, quotes and newlines (the record must already be complete).
inline std::vector<std::string> split_record(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

} // namespace csv

/// RFC 4180 CSV with a mandatory header row: "file" plus the column names.
/// Missing cells serialize as empty fields.
inline void write_csv(const FeatureMatrix& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(errc::io_error, "cannot open for writing: " + path.string());

    out << "file";
    for (const auto& name : m.column_names) out << ',' << csv::escape_field(name);
    out << "\r\n";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out << csv::escape_field(m.row_ids[r]);
        for (std::size_t c = 0; c < m.cols(); ++c) out << ',' << csv::format_value(m.at(r, c));
        out << "\r\n";
    }
    if (!out) raise(errc::io_error, "short write: " + path.string());
}

/// Parse a CSV produced by write_csv back into a FeatureMatrix.
inline FeatureMatrix read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(errc::file_not_found, path.string());

    // Records may contain quoted newlines; read and split respecting quotes.
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::vector<std::string> records;
    std::string cur;
    bool quoted = false;
    for (char ch : content) {
        if (ch == '"') quoted = !quoted;
        if (ch == '\n' && !quoted) {
            records.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) records.push_back(cur);
    if (records.empty()) raise(errc::io_error, "empty CSV: " + path.string());

    FeatureMatrix m;
    std::vector<std::string> header = csv::split_record(records[0]);
    if (header.empty() || header[0] != "file")
        raise(errc::io_error, "CSV header must start with 'file'");
    m.column_names.assign(header.begin() + 1, header.end());

    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].empty()) continue;
        std::vector<std::string> fields = csv::split_record(records[r]);
        if (fields.size() != header.size())
            raise(errc::io_error, "CSV row " + std::to_string(r) + " has " +
                                      std::to_string(fields.size()) + " fields, expected " +
                                      std::to_string(header.size()));
        m.row_ids.push_back(fields[0]);
        for (std::size_t c = 1; c < fields.size(); ++c) {
            if (fields[c].empty()) {
                m.cells.push_back(kMissing);
            } else {
                double v = 0.0;
                auto [ptr, ec] = std::from_chars(fields[c].data(),
                                                 fields[c].data() + fields[c].size(), v);
                if (ec != std::errc{}) raise(errc::io_error, "bad number: " + fields[c]);
                m.cells.push_back(v);
            }
        }
    }
    return m;
}

/// Extract one named column (for the compare subcommand).
inline std::vector<double> csv_column(const FeatureMatrix& m, const std::string& name) {
    for (std::size_t c = 0; c < m.cols(); ++c)
        if (m.column_names[c] == name) {
            std::vector<double> out;
            out.reserve(m.rows());
            for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(m.at(r, c));
            return out;
        }
    raise(errc::bad_parameter, "no such column: " + name);
}

} // namespace vocalis
