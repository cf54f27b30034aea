// Copyright 2026 The Vocalis Authors
//
// Licensed under the Apache License, Version 2.0
//
// Feature configuration file parsing. The file format is a YAML-compatible
// mapping restricted to what the pipeline needs: scalar values, flow lists
// of scalars, block lists whose items are scalars or single-key maps of
// component name to a parameter map. Anchors, multi-line strings and other
// YAML constructs are rejected with a line-numbered error.

#pragma once

#include <cctype>
#include <cstddef>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vocalis/errors.hpp"

namespace vocalis {

/// One selected component with its numeric parameter overrides.
struct ComponentSpec {
    std::string name;
    std::map<std::string, double> params;
};

/// Declarative extraction plan. An explicitly empty statistics list selects
/// passthrough mode (raw time series output); an absent key selects the full
/// statistic catalog.
struct FeatureConfig {
    std::vector<ComponentSpec> components;
    std::vector<std::string> statistics;
    bool passthrough = false;
    std::optional<int> sample_rate;
    int n_jobs = 1;
};

namespace yaml {

struct Line {
    int number = 0;
    int indent = 0;
    std::string text; // content with indentation and comments stripped
};

[[noreturn]] inline void syntax_error(int line, const std::string& message) {
    raise(errc::config_syntax, "line " + std::to_string(line) + ": " + message);
}

inline std::string strip_comment(const std::string& s) {
    bool in_single = false, in_double = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char ch = s[i];
        if (ch == '\'' && !in_double) in_single = !in_single;
        else if (ch == '"' && !in_single) in_double = !in_double;
        else if (ch == '#' && !in_single && !in_double) return s.substr(0, i);
    }
    return s;
}

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::vector<Line> read_lines(const std::string& content) {
    std::vector<Line> lines;
    int number = 0;
    std::size_t pos = 0;
    while (pos <= content.size()) {
        const std::size_t eol = content.find('\n', pos);
        std::string raw = content.substr(pos, eol == std::string::npos ? eol : eol - pos);
        ++number;
        pos = eol == std::string::npos ? content.size() + 1 : eol + 1;

        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::string no_comment = strip_comment(raw);
        const std::string body = trim(no_comment);
        if (body.empty()) continue;
        int indent = 0;
        for (char ch : no_comment) {
            if (ch == ' ') ++indent;
            else if (ch == '\t') syntax_error(number, "tabs are not allowed for indentation");
            else break;
        }
        lines.push_back({number, indent, body});
    }
    return lines;
}

inline std::string unquote(const std::string& s, int line) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                          (s.front() == '\'' && s.back() == '\''))) {
        return s.substr(1, s.size() - 2);
    }
    if (!s.empty() && (s.front() == '"' || s.front() == '\''))
        syntax_error(line, "unterminated quote");
    return s;
}

inline std::optional<double> parse_number(const std::string& s) {
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) return std::nullopt;
    return v;
}

inline std::vector<std::string> parse_flow_list(const std::string& s, int line) {
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        syntax_error(line, "expected a [a, b, ...] list");
    std::vector<std::string> items;
    std::string inner = s.substr(1, s.size() - 2);
    std::size_t start = 0;
    while (start <= inner.size()) {
        std::size_t comma = inner.find(',', start);
        std::string item = trim(inner.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start));
        if (!item.empty()) items.push_back(unquote(item, line));
        else if (comma != std::string::npos || !items.empty() || !trim(inner).empty())
            if (comma != std::string::npos) syntax_error(line, "empty list item");
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return items;
}

/// Split "key: value" returning {key, value}; value may be empty.
inline std::pair<std::string, std::string> split_key(const std::string& s, int line) {
    const std::size_t colon = s.find(':');
    if (colon == std::string::npos) syntax_error(line, "expected 'key: value'");
    std::string key = trim(s.substr(0, colon));
    std::string value = trim(s.substr(colon + 1));
    if (key.empty()) syntax_error(line, "empty key");
    return {unquote(key, line), value};
}

} // namespace yaml

/// Parse the configuration file. Structural and type errors raise
/// ConfigSyntaxError with the offending line; vocabulary validation against
/// the component registry happens in validate_config().
inline FeatureConfig parse_config_text(const std::string& content) {
    using namespace yaml;
    std::vector<Line> lines = read_lines(content);

    FeatureConfig cfg;
    bool have_statistics_key = false;

    std::size_t i = 0;
    while (i < lines.size()) {
        const Line& line = lines[i];
        if (line.indent != 0) syntax_error(line.number, "unexpected indentation");
        auto [key, value] = split_key(line.text, line.number);

        if (key == "components") {
            if (!value.empty()) {
                for (const auto& name : parse_flow_list(value, line.number))
                    cfg.components.push_back({name, {}});
                ++i;
                continue;
            }
            ++i;
            if (i >= lines.size() || lines[i].text[0] != '-')
                syntax_error(line.number, "components must be a list");
            const int item_indent = lines[i].indent;
            while (i < lines.size() && lines[i].indent == item_indent &&
                   lines[i].text[0] == '-') {
                const Line& item = lines[i];
                std::string body = trim(item.text.substr(1));
                if (body.empty()) syntax_error(item.number, "empty list item");

                ComponentSpec spec;
                if (body.find(':') == std::string::npos) {
                    spec.name = unquote(body, item.number);
                    ++i;
                } else {
                    auto [name, rest] = split_key(body, item.number);
                    spec.name = name;
                    if (!rest.empty())
                        syntax_error(item.number,
                                     "component parameters must be an indented map");
                    ++i;
                    while (i < lines.size() && lines[i].indent > item_indent) {
                        auto [pkey, pval] = split_key(lines[i].text, lines[i].number);
                        auto num = parse_number(pval);
                        if (!num)
                            syntax_error(lines[i].number,
                                         "parameter '" + pkey + "' must be numeric");
                        spec.params[pkey] = *num;
                        ++i;
                    }
                }
                cfg.components.push_back(std::move(spec));
            }
        } else if (key == "statistics") {
            have_statistics_key = true;
            if (!value.empty()) {
                cfg.statistics = parse_flow_list(value, line.number);
                ++i;
            } else {
                ++i;
                while (i < lines.size() && lines[i].indent > 0 && lines[i].text[0] == '-') {
                    std::string body = trim(lines[i].text.substr(1));
                    if (body.empty()) syntax_error(lines[i].number, "empty list item");
                    cfg.statistics.push_back(unquote(body, lines[i].number));
                    ++i;
                }
            }
        } else if (key == "sample_rate") {
            auto num = parse_number(value);
            if (!num || *num <= 0.0 || *num != static_cast<int>(*num))
                syntax_error(line.number, "sample_rate must be a positive integer");
            cfg.sample_rate = static_cast<int>(*num);
            ++i;
        } else if (key == "n_jobs") {
            auto num = parse_number(value);
            if (!num || *num < 1.0 || *num != static_cast<int>(*num))
                syntax_error(line.number, "n_jobs must be a positive integer");
            cfg.n_jobs = static_cast<int>(*num);
            ++i;
        } else {
            syntax_error(line.number, "unknown key '" + key + "'");
        }
    }

    if (cfg.components.empty())
        raise(errc::config_syntax, "config selects no components");
    cfg.passthrough = have_statistics_key && cfg.statistics.empty();
    return cfg;
}

inline FeatureConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(errc::file_not_found, path.string());
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config_text(content);
}

} // namespace vocalis
