#include "gaussolve/runner/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "gaussolve/errors.hpp"

namespace gaussolve::runner {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (x == 0.0) return "0";  // no "-0"
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

CsvBuilder::CsvBuilder(std::span<const std::string_view> header) {
    for (auto h : header) add(h);
    end_row();
}

CsvBuilder::CsvBuilder(const std::vector<std::string>& header) {
    for (const auto& h : header) add(h);
    end_row();
}

void CsvBuilder::separator() {
    if (row_open_) buf_ += ',';
    row_open_ = true;
}

CsvBuilder& CsvBuilder::add(double x) {
    separator();
    buf_ += format_double(x);
    return *this;
}

CsvBuilder& CsvBuilder::add(std::string_view text) {
    separator();
    buf_ += text;
    return *this;
}

void CsvBuilder::end_row() {
    buf_ += '\n';
    row_open_ = false;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) { write_file(path, doc.dump(2) + "\n"); }

}  // namespace gaussolve::runner
