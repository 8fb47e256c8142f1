// Copyright (C) 2026 The mrsampler Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli/output.hpp"

#include <cmath>
#include <cstdio>

#include "cli/handles.hpp"

namespace mrcli {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw RunError(kExitConfig, "cannot write '" + path.string() + "'");
    for (const auto& h : header) field(h);
    end_row();
}

void CsvWriter::separator() {
    if (row_started_) out_.put(',');
    row_started_ = true;
}

CsvWriter& CsvWriter::field(std::string_view text) {
    separator();
    out_.write(text.data(), static_cast<std::streamsize>(text.size()));
    return *this;
}

CsvWriter& CsvWriter::field(double x) { return field(std::string_view(format_double(x))); }

CsvWriter& CsvWriter::field(std::size_t n) { return field(std::string_view(std::to_string(n))); }

void CsvWriter::end_row() {
    out_.put('\n');
    row_started_ = false;
    if (!out_) throw RunError(kExitConfig, "write failed for '" + path_.string() + "'");
}

void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw RunError(kExitConfig, "cannot create '" + dir.string() + "': " + ec.message());
}

nlohmann::json json_number(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

nlohmann::json json_array(const std::vector<double>& xs) {
    nlohmann::json out = nlohmann::json::array();
    for (double x : xs) out.push_back(json_number(x));
    return out;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw RunError(kExitConfig, "cannot write '" + path.string() + "'");
    out << doc.dump(2) << '\n';
    if (!out) throw RunError(kExitConfig, "write failed for '" + path.string() + "'");
}

}  // namespace mrcli
