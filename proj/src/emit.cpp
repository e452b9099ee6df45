#include "horolab/emit.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "horolab/error.hpp"
#include "horolab/version.hpp"

namespace horolab {

namespace {

std::string number(double v) {
    if (std::isnan(v)) return "";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << body;
    out.close();
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

} // namespace

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

void write_csv(const DensityReport& rep, std::ostream& out) {
    out << kCsvHeader << "\r\n";
    for (const auto& r : rep.rows) {
        out << csv_field(r.experiment) << ',' << csv_field(r.level) << ',' << r.n << ',' << csv_field(r.test_fn) << ','
            << number(r.value) << ',' << number(r.reference) << ',' << number(r.deficit) << ',' << number(r.budget)
            << ',' << number(r.coverage) << "\r\n";
    }
}

nlohmann::json summary_json(const DensityReport& rep, const ExperimentConfig& cfg) {
    using nlohmann::json;
    json j;
    j["experiment"] = rep.experiment;
    j["version"] = kVersion;
    j["seed"] = cfg.seed;
    j["config"] = to_json(cfg);
    json b = json::object();
    for (const auto& [name, e] : rep.birkhoff)
        b[name] = {{"value", e.value}, {"haar_value", e.haar_value}, {"deficit", e.deficit}};
    j["birkhoff"] = b;
    j["coverage"] = std::isnan(rep.coverage) ? json(nullptr) : json(rep.coverage);
    json budgets = json::array();
    for (const auto& [label, eb] : rep.budgets) {
        json terms = json::array();
        for (const auto& t : eb.terms) terms.push_back({{"name", t.name}, {"log10", t.log10_value}});
        budgets.push_back({{"level", label}, {"terms", terms}, {"log10_total", eb.log10_total}});
    }
    j["budgets"] = budgets;
    j["verdicts"] = rep.verdicts;
    j["details"] = rep.details;
    j["schedule_clamped"] = rep.clamped;
    j["warnings"] = rep.warnings;
    j["rows"] = rep.rows.size();
    return j;
}

void emit(const DensityReport& rep, const ExperimentConfig& cfg, const std::string& dir, const std::string& format) {
    require(format == "csv" || format == "json" || format == "both", "format must be csv, json or both");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());
    const std::filesystem::path base = std::filesystem::path(dir) / rep.experiment;
    if (format != "json") {
        std::ostringstream csv;
        write_csv(rep, csv);
        write_file(base.string() + ".csv", csv.str());
    }
    if (format != "csv") write_file(base.string() + ".json", summary_json(rep, cfg).dump(2) + "\n");
}

} // namespace horolab
