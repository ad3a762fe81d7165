#include "fmlab/output.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fmlab {

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) x = 0.0;  // drop the sign of -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

void dump_rec(const nlohmann::json& j, std::string& out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in + nlohmann::json(it.key()).dump() + ": ";
                dump_rec(it.value(), out, indent + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case nlohmann::json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                dump_rec(v, out, indent + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case nlohmann::json::value_t::number_float: {
            const double x = j.get<double>();
            if (std::isfinite(x))
                out += format_real(x);
            else
                out += "\"" + format_real(x) + "\"";
            return;
        }
        default:
            out += j.dump();
    }
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string r = "\"";
    for (char c : s) {
        if (c == '"') r += '"';
        r += c;
    }
    return r + "\"";
}

}  // namespace

std::string dump_json(const nlohmann::json& doc) {
    std::string out;
    dump_rec(doc, out, 0);
    out += "\n";
    return out;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

CsvWriter& CsvWriter::cell(const std::string& s) {
    current_.push_back(csv_escape(s));
    return *this;
}
CsvWriter& CsvWriter::cell(double x) {
    current_.push_back(format_real(x));
    return *this;
}
CsvWriter& CsvWriter::cell(long long x) {
    current_.push_back(std::to_string(x));
    return *this;
}

void CsvWriter::end_row() {
    if (current_.size() != header_.size())
        throw std::logic_error("CsvWriter: row width does not match header");
    rows_.push_back(std::move(current_));
    current_.clear();
}

std::string CsvWriter::str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    std::vector<std::string> h;
    for (const auto& c : header_) h.push_back(csv_escape(c));
    line(h);
    for (const auto& r : rows_) line(r);
    return out;
}

std::filesystem::path output_directory(const std::string& explicit_dir) {
    if (!explicit_dir.empty()) return explicit_dir;
    if (const char* env = std::getenv("FMLAB_OUTPUT_DIR"); env && *env) return env;
    return std::filesystem::current_path();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
}

}  // namespace fmlab
