#pragma once

// Report output: RFC-4180 CSV rows plus a JSON summary. Both are pure
// functions of the report and config, so identical runs give identical bytes.

#include <ostream>
#include <string>

#include <json.hpp>

#include "horolab/config.hpp"
#include "horolab/experiments.hpp"

namespace horolab {

inline constexpr const char* kCsvHeader = "experiment,level,n,test_fn,value,reference,deficit,budget,coverage";

std::string csv_field(const std::string& s);
void write_csv(const DensityReport& rep, std::ostream& out);
nlohmann::json summary_json(const DensityReport& rep, const ExperimentConfig& cfg);

// Writes <dir>/<experiment>.csv and/or <dir>/<experiment>.json;
// format is "csv", "json" or "both". IO failures name the path.
void emit(const DensityReport& rep, const ExperimentConfig& cfg, const std::string& dir,
          const std::string& format = "both");

} // namespace horolab
