// Copyright (C) 2026 The mrsampler Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace mrcli {

/// Shortest-safe round-trip text for a double ("%.17g"); non-finite values
/// print as nan / inf / -inf.
std::string format_double(double x);

/// Plain CSV writer: LF line endings, '.' decimal separator, no quoting
/// (fields never contain separators).
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    CsvWriter& field(std::string_view text);
    CsvWriter& field(double x);
    CsvWriter& field(std::size_t n);
    void end_row();

private:
    void separator();

    std::filesystem::path path_;
    std::ofstream out_;
    bool row_started_ = false;
};

/// Creates `dir` and its parents if needed.
void ensure_directory(const std::filesystem::path& dir);

/// Finite doubles as numbers, non-finite as null.
nlohmann::json json_number(double x);
nlohmann::json json_array(const std::vector<double>& xs);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace mrcli
