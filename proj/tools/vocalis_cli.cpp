// Copyright 2026 The Vocalis Authors
//
// Licensed under the Apache License, Version 2.0
//
// Command-line batch extraction and the Spearman comparison utility.
//
//   vocalis extract -i <dir> -o <out.csv> -F <config> [-j N] [--impute] [--log <file>]
//   vocalis compare -a <col@csv> -b <col@csv>
//
// Exit codes: 0 success, 1 usage/config error, 2 no audio found.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "vocalis/vocalis.hpp"

namespace {

/// Split "column@path.csv" at the last '@'.
std::pair<std::string, std::string> split_column_ref(const std::string& ref) {
    const std::size_t at = ref.rfind('@');
    if (at == std::string::npos || at == 0 || at + 1 >= ref.size())
        throw CLI::ValidationError("expected <column>@<csv-path>, got '" + ref + "'");
    return {ref.substr(0, at), ref.substr(at + 1)};
}

int run_extract(const std::string& input_dir, const std::string& output_csv,
                const std::string& config_path, int jobs, bool impute,
                const std::string& log_path) {
    vocalis::FeatureConfig cfg;
    try {
        cfg = vocalis::parse_config(config_path);
    } catch (const vocalis::Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }

    std::ofstream log_file;
    std::ostream* log = &std::cerr;
    if (!log_path.empty()) {
        log_file.open(log_path);
        if (!log_file) {
            std::cerr << "cannot open log file: " << log_path << "\n";
            return 1;
        }
        log = &log_file;
    }

    try {
        std::optional<std::filesystem::path> series_dir;
        if (cfg.passthrough) {
            series_dir = std::filesystem::path(output_csv).replace_extension("") += ".series";
            std::filesystem::create_directories(*series_dir);
        }

        vocalis::ExtractionReport report =
            vocalis::extract_directory(input_dir, cfg, jobs, series_dir);
        for (const auto& w : report.warnings)
            *log << "file=" << w.file << " component=" << (w.component.empty() ? "-" : w.component)
                 << " error=" << w.kind << " detail=\"" << w.message << "\"\n";

        if (impute) {
            std::vector<std::string> dead_columns;
            report.matrix = vocalis::impute_column_means(report.matrix, &dead_columns);
            for (const auto& name : dead_columns)
                *log << "file=- component=- error=AllMissingColumn detail=\"" << name
                     << " imputed as 0\"\n";
        }

        vocalis::write_csv(report.matrix, output_csv);
        std::cout << report.matrix.rows() << " rows x " << report.matrix.cols()
                  << " features -> " << output_csv << "\n";
        return 0;
    } catch (const vocalis::Error& e) {
        std::cerr << e.what() << "\n";
        return e.code() == vocalis::errc::no_audio_found ? 2 : 1;
    }
}

int run_compare(const std::string& ref_a, const std::string& ref_b) {
    try {
        auto [col_a, path_a] = split_column_ref(ref_a);
        auto [col_b, path_b] = split_column_ref(ref_b);
        vocalis::FeatureMatrix ma = vocalis::read_csv(path_a);
        vocalis::FeatureMatrix mb = vocalis::read_csv(path_b);
        std::vector<double> a = vocalis::csv_column(ma, col_a);
        std::vector<double> b = vocalis::csv_column(mb, col_b);

        // Drop rows where either side is missing.
        std::vector<double> xa, xb;
        for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
            if (!vocalis::is_missing(a[i]) && !vocalis::is_missing(b[i])) {
                xa.push_back(a[i]);
                xb.push_back(b[i]);
            }

        const double rho = vocalis::spearman_rho(xa, xb);
        std::printf("spearman_rho %.6f (n=%zu)\n", rho, xa.size());
        return 0;
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const vocalis::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"vocalis: clinical audio feature extraction"};
    app.require_subcommand(1);

    auto* extract = app.add_subcommand("extract", "extract features from a directory of audio");
    std::string input_dir, output_csv, config_path, log_path;
    int jobs = 0;
    bool impute = false;
    extract->add_option("-i,--input", input_dir, "input directory (recursive .wav/.flac scan)")
        ->required();
    extract->add_option("-o,--output", output_csv, "output CSV path")->required();
    extract->add_option("-F,--config", config_path, "feature configuration file")->required();
    extract->add_option("-j,--jobs", jobs, "worker count (overrides the config)");
    extract->add_flag("--impute", impute, "replace missing cells with column means");
    extract->add_option("--log", log_path, "write extraction warnings to this file");

    auto* compare = app.add_subcommand("compare", "Spearman rank correlation of two CSV columns");
    std::string ref_a, ref_b;
    compare->add_option("-a", ref_a, "first column as <column>@<csv>")->required();
    compare->add_option("-b", ref_b, "second column as <column>@<csv>")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (extract->parsed()) return run_extract(input_dir, output_csv, config_path, jobs, impute, log_path);
    return run_compare(ref_a, ref_b);
}
