// output.hpp: byte-stable CSV and JSON serialization

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace gaussolve::runner {

// "%.17g": round-trips every double; NaN prints as "nan".
std::string format_double(double x);

// Accumulates comma-separated rows with LF line endings.
class CsvBuilder {
public:
    explicit CsvBuilder(std::span<const std::string_view> header);
    explicit CsvBuilder(const std::vector<std::string>& header);

    CsvBuilder& add(double x);
    CsvBuilder& add(std::string_view text);
    void end_row();

    const std::string& str() const noexcept { return buf_; }

private:
    void separator();
    std::string buf_;
    bool row_open_{false};
};

// Writes in binary mode so line endings are exactly as given.
void write_file(const std::filesystem::path& path, std::string_view content);

// Pretty JSON with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace gaussolve::runner
