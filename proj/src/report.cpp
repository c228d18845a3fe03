#include "rhls/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "rhls/errors.hpp"

namespace rhls {

void RunReport::set(const std::string& name, double value, double error_estimate) {
    outputs[name] = value;
    error_estimates[name] = error_estimate;
}

void RunReport::validate() const {
    for (const auto& [name, value] : outputs) {
        if (!std::isfinite(value)) throw InvalidArgument("output " + name + " is not finite");
        const auto it = error_estimates.find(name);
        if (it == error_estimates.end()) throw InvalidArgument("output " + name + " has no error estimate");
        if (!std::isfinite(it->second) || it->second < 0) throw InvalidArgument("bad error estimate for " + name);
    }
}

nlohmann::json RunReport::to_json() const {
    validate();
    nlohmann::json j;
    j["command"] = command;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    j["error_estimates"] = error_estimates;
    j["seed"] = seed;
    j["wall_time_ms"] = wall_time_ms;
    j["schema_version"] = schema_version;
    return j;
}

std::string RunReport::dump() const { return to_json().dump(2) + "\n"; }

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_text(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
    out += "\n";
    for (const auto& row : rows) {
        if (row.size() != header.size()) throw InvalidArgument("csv row width does not match header");
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_double(row[i]);
        out += "\n";
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InvalidArgument("cannot open " + path);
    os << text;
    if (!os) throw InvalidArgument("write failed: " + path);
}

}  // namespace rhls
