#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace eqbound::cli {

struct CheckResult {
    std::string name;
    bool pass = false;
    nlohmann::json details;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;

    bool all_pass() const;
    nlohmann::json to_json() const;
};

SuiteReport run_generr_suite(std::uint64_t seed, std::size_t random_instances = 25);
SuiteReport run_cover_suite();
SuiteReport run_iso_suite();
SuiteReport run_kt_suite();

} // namespace eqbound::cli
