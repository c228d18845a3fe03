#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace rhls {

inline constexpr const char* kSchemaVersion = "1.0.0";

struct RunReport {
    std::string command;
    nlohmann::json inputs = nlohmann::json::object();
    std::map<std::string, double> outputs;
    std::map<std::string, double> error_estimates;
    std::uint64_t seed = 0;
    std::int64_t wall_time_ms = 0;
    std::string schema_version = kSchemaVersion;

    // Records an output together with its error estimate (0 for closed forms).
    void set(const std::string& name, double value, double error_estimate = 0);
    // Throws InvalidArgument when an output lacks an error estimate or is not finite.
    void validate() const;
    nlohmann::json to_json() const;
    std::string dump() const;  // two-space indented, trailing newline
};

// Fixed header, '.' decimal point, 17 significant digits.
std::string format_double(double x);
std::string csv_text(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);
void write_text(const std::string& path, const std::string& text);

}  // namespace rhls
