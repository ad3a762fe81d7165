#pragma once
// Acceptance battery: one line per criterion, artifacts under <output>/acceptance.
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace fmlab::acceptance {

inline constexpr int kCriteria = 11;

struct SuiteOptions {
    std::filesystem::path output_dir;  // artifacts go to output_dir / "acceptance"
    unsigned threads = 0;
    std::uint64_t seed = 20240611;
    std::vector<int> only;             // empty = all criteria
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool checks_pass = false;
    double seconds = 0;
    double time_limit = 0;  // 0 = none
    std::string detail;
    nlohmann::json data;    // written as c<id>.json (no timings, so reruns compare byte for byte)

    bool within_time() const { return time_limit <= 0 || seconds < time_limit; }
    bool pass() const { return checks_pass && within_time(); }
};

std::string format_line(const CriterionResult& r);

/// Runs one criterion 1..10 and writes its artifacts into dir. Criterion 11 needs run_suite.
CriterionResult run_criterion(int id, const std::filesystem::path& dir, unsigned threads, std::uint64_t seed);

/// Runs the selected criteria, printing format_line for each as it finishes.
std::vector<CriterionResult> run_suite(const SuiteOptions& opt, std::ostream& log);

}  // namespace fmlab::acceptance
