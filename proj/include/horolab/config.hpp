#pragma once

// Experiment configuration. JSON on disk, reals as decimal strings (or a
// few named constants) so a config means the same thing everywhere.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "horolab/diophantine.hpp"

namespace horolab {

// Accepted real literals:
//   "0.125", "-3.5e-2"       decimal, known to half a unit in the last place
//   "7/19"                   exact rational
//   "sqrt(2)", "golden", "e-2"  certified enclosures
//   any of the named ones followed by "+k" or "-k" for an integer k
RealInterval parse_real(const std::string& s);
double parse_real_double(const std::string& s);

struct PointSpec {
    std::string kind = "identity";   // identity | real | rational | non_dioph | group
    std::string x = "0";             // real
    std::int64_t p = 0, q = 1;       // rational
    int mu = 100;                    // non_dioph
    std::size_t levels = 2;
    std::vector<long> prefix{0, 1};
    std::vector<std::string> matrix; // group: a b c d of h, the point hΓ
    std::string s = "0";             // E = u0(s)·a_α·lower(x)
    std::string alpha = "1";
    bool operator==(const PointSpec&) const = default;
};

struct SequenceConfig {
    std::string kind = "power";      // power | squares | almost_primes
    std::string c = "1";
    std::string gamma = "0.05";
    std::string alpha = "1";
    unsigned L = 1;
    bool operator==(const SequenceConfig&) const = default;
};

struct CoverageConfig {
    std::size_t nx = 32, ny = 32;
    std::string x_lo = "-0.5", x_hi = "0.5", y_lo = "1", y_hi = "3";
    bool operator==(const CoverageConfig&) const = default;
};

struct ExperimentConfig {
    std::string experiment;          // th11 | th12 | th13 | effective_probe | expsum_grid | sieve_grid | dioph | period
    PointSpec point;
    SequenceConfig sequence;
    std::vector<std::uint64_t> n_schedule;
    std::uint64_t max_n = 10000000;
    std::vector<std::string> test_functions;  // empty: the standard set
    CoverageConfig coverage;
    nlohmann::json params = nlohmann::json::object();  // experiment-specific knobs
    std::string out = "out";
    int threads = 0;
    std::uint64_t seed = 0;
    bool operator==(const ExperimentConfig&) const = default;

    // params lookups with defaults; reals must be strings.
    double real(const std::string& key, const std::string& def) const;
    std::string text(const std::string& key, const std::string& def) const;
    std::int64_t integer(const std::string& key, std::int64_t def) const;
    std::vector<std::int64_t> integers(const std::string& key, std::vector<std::int64_t> def) const;
    std::vector<std::string> reals(const std::string& key, std::vector<std::string> def) const;
};

const std::vector<std::string>& experiment_names();
// CLI subcommand (th11, probe, expsum, ...) to experiment name.
std::string experiment_for_command(const std::string& cmd);

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& cfg);
void validate(const ExperimentConfig& cfg);

} // namespace horolab
