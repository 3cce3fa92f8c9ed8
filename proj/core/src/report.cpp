#include "nosas/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "nosas/errors.hpp"

namespace nosas {

using nlohmann::json;

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_or_inf(const json& j)
{
    return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

json config_json(const ExperimentConfig& c)
{
    return json{{"subdomains", c.subdomains},
                {"cells", c.cells},
                {"pattern", to_string(c.pattern.variant)},
                {"high", c.pattern.high_value},
                {"low", c.pattern.low_value},
                {"extra", c.pattern.extra_value},
                {"channels", c.pattern.channels},
                {"raster", c.pattern.raster_path},
                {"kind", to_string(c.coarse.kind)},
                {"c", c.coarse.c},
                {"rtol", c.rtol},
                {"max_iter", c.max_iter},
                {"verify", c.verify},
                {"spectra", c.spectra},
                {"threads", c.threads},
                {"out", c.out}};
}

std::string scalar_text(const json& v)
{
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw InvalidParameter("config values must be scalars");
}

bool parse_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw InvalidParameter("config key '" + key + "': expected a boolean, got '" + v + "'");
}

int parse_int(const std::string& key, const std::string& v)
{
    try {
        std::size_t used = 0;
        const int x = std::stoi(v, &used);
        if (used == v.size()) return x;
    } catch (const std::exception&) {
    }
    throw InvalidParameter("config key '" + key + "': expected an integer, got '" + v + "'");
}

double parse_double(const std::string& key, const std::string& v)
{
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used == v.size()) return x;
    } catch (const std::exception&) {
    }
    throw InvalidParameter("config key '" + key + "': expected a number, got '" + v + "'");
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

std::string config_to_json(const ExperimentConfig& config) { return config_json(config).dump(2); }

std::string report_to_json(const ExperimentReport& r)
{
    json verify = nullptr;
    if (r.verify_cond)
        verify = json{{"cond", *r.verify_cond}, {"lambda_min", *r.verify_lambda_min}, {"lambda_max", *r.verify_lambda_max}};
    json j{{"schema", report_schema},
           {"config", config_json(r.config)},
           {"result",
            {{"dofs", r.dofs},
             {"interface_dofs", r.interface_dofs},
             {"iterations", r.iterations},
             {"converged", r.converged},
             {"final_residual", r.final_residual},
             {"cond_estimate", finite_or_null(r.cond_estimate)},
             {"lambda_min_estimate", r.lambda_min_estimate},
             {"lambda_max_estimate", r.lambda_max_estimate},
             {"verify", verify},
             {"coarse_dim", r.coarse_dim},
             {"kept", r.kept},
             {"spectra", r.spectra},
             {"eta", r.eta},
             {"lambda_min_eta", finite_or_null(r.lambda_min_eta)},
             {"theoretical_upper", r.theoretical_upper}}},
           {"timings",
            {{"assembly", r.timings.assembly},
             {"setup", r.timings.setup},
             {"pcg", r.timings.pcg},
             {"verify", r.timings.verify},
             {"total", r.timings.total}}}};
    return j.dump(2);
}

ExperimentReport report_from_json(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw FormatError(std::string("report is not valid JSON: ") + e.what());
    }
    if (!j.contains("schema") || j["schema"] != report_schema) throw FormatError("unsupported report schema");
    try {
        ExperimentReport r;
        std::map<std::string, std::string> settings;
        for (auto& [k, v] : j["config"].items()) settings[k] = scalar_text(v);
        apply_settings(r.config, settings);
        const json& res = j["result"];
        r.dofs = res["dofs"];
        r.interface_dofs = res["interface_dofs"];
        r.iterations = res["iterations"];
        r.converged = res["converged"];
        r.final_residual = res["final_residual"];
        r.cond_estimate = number_or_inf(res["cond_estimate"]);
        r.lambda_min_estimate = res["lambda_min_estimate"];
        r.lambda_max_estimate = res["lambda_max_estimate"];
        if (!res["verify"].is_null()) {
            r.verify_cond = res["verify"]["cond"].get<double>();
            r.verify_lambda_min = res["verify"]["lambda_min"].get<double>();
            r.verify_lambda_max = res["verify"]["lambda_max"].get<double>();
        }
        r.coarse_dim = res["coarse_dim"];
        r.kept = res["kept"].get<std::vector<int>>();
        r.spectra = res["spectra"].get<std::vector<std::vector<double>>>();
        r.eta = res["eta"];
        r.lambda_min_eta = number_or_inf(res["lambda_min_eta"]);
        r.theoretical_upper = res["theoretical_upper"];
        const json& t = j["timings"];
        r.timings = {t["assembly"], t["setup"], t["pcg"], t["verify"], t["total"]};
        return r;
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed report: ") + e.what());
    }
}

void apply_settings(ExperimentConfig& c, const std::map<std::string, std::string>& settings)
{
    // Pattern first, so that its default values can be overridden by high/low/extra.
    if (auto it = settings.find("pattern"); it != settings.end()) {
        const PatternSpec keep = c.pattern;
        c.pattern = default_pattern(pattern_from_string(it->second));
        c.pattern.channels = keep.channels;
        c.pattern.raster_path = keep.raster_path;
    }
    for (const auto& [key, v] : settings) {
        if (key == "pattern") continue;
        if (key == "subdomains") c.subdomains = parse_int(key, v);
        else if (key == "cells") c.cells = parse_int(key, v);
        else if (key == "kind") c.coarse.kind = coarse_kind_from_string(v);
        else if (key == "c") c.coarse.c = parse_double(key, v);
        else if (key == "rtol") c.rtol = parse_double(key, v);
        else if (key == "max_iter" || key == "max-iter") c.max_iter = parse_int(key, v);
        else if (key == "verify") c.verify = parse_bool(key, v);
        else if (key == "spectra") c.spectra = parse_bool(key, v);
        else if (key == "threads") c.threads = parse_int(key, v);
        else if (key == "out") c.out = v;
        else if (key == "high") c.pattern.high_value = parse_double(key, v);
        else if (key == "low") c.pattern.low_value = parse_double(key, v);
        else if (key == "extra") c.pattern.extra_value = parse_double(key, v);
        else if (key == "channels") c.pattern.channels = parse_int(key, v);
        else if (key == "raster") c.pattern.raster_path = v;
        else throw InvalidParameter("unknown config key '" + key + "'");
    }
}

std::map<std::string, std::string> parse_config_text(const std::string& text)
{
    std::map<std::string, std::string> out;
    const std::string body = trim(text);
    if (!body.empty() && body.front() == '{') {
        json j;
        try {
            j = json::parse(body);
        } catch (const json::exception& e) {
            throw InvalidParameter(std::string("config is not valid JSON: ") + e.what());
        }
        for (auto& [k, v] : j.items()) out[k] = scalar_text(v);
        return out;
    }
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidParameter("config line " + std::to_string(lineno) + ": expected key=value");
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void write_file_atomic(const std::string& path, const std::string& content)
{
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InvalidParameter("cannot write '" + tmp + "'");
        out << content;
        out.flush();
        if (!out) throw InvalidParameter("write to '" + tmp + "' failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::remove(tmp.c_str());
        throw InvalidParameter("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
    }
}

} // namespace nosas
