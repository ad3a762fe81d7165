#pragma once
#include <json.hpp>

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace fmlab {

/// Fixed 17-significant-digit rendering; "inf", "-inf", "nan" for non-finite values.
std::string format_real(double x);

/// JSON text with every floating value rendered by format_real (non-finite as strings).
/// Keys are sorted (nlohmann default object ordering), two-space indentation.
std::string dump_json(const nlohmann::json& doc);

/// Minimal CSV writer; numeric cells go through format_real.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    CsvWriter& cell(const std::string& s);
    CsvWriter& cell(double x);
    CsvWriter& cell(long long x);
    CsvWriter& cell(int x) { return cell(static_cast<long long>(x)); }
    CsvWriter& cell(std::size_t x) { return cell(static_cast<long long>(x)); }
    void end_row();
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
    std::vector<std::string> current_;
};

/// Output directory: explicit value, else $FMLAB_OUTPUT_DIR, else the working directory.
std::filesystem::path output_directory(const std::string& explicit_dir = "");

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace fmlab
