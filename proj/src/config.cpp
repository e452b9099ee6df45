#include "horolab/config.hpp"

#include <algorithm>
#include <fstream>
#include <regex>

#include "horolab/error.hpp"

namespace horolab {

using nlohmann::json;

RealInterval parse_real(const std::string& s) {
    static const std::regex named(R"(^\s*(sqrt\((\d+)\)|golden|e-2)\s*(([+-])\s*(\d+))?\s*$)");
    static const std::regex rational(R"(^\s*(-?\d+)\s*/\s*(\d+)\s*$)");
    std::smatch m;
    if (std::regex_match(s, m, named)) {
        RealInterval base;
        if (m[1] == "golden")
            base = RealInterval::golden_ratio();
        else if (m[1] == "e-2")
            base = RealInterval::e_minus_two();
        else
            base = RealInterval::sqrt_of(std::stoul(m[2].str()));
        if (m[3].matched) {
            const BigRational k(BigInt(m[5].str()));
            base = m[4] == "+" ? base + k : base - k;
        }
        return base;
    }
    if (std::regex_match(s, m, rational)) {
        require(m[2] != "0", "zero denominator in '" + s + "'");
        return RealInterval::exact(BigRational(BigInt(m[1].str()), BigInt(m[2].str())));
    }
    try {
        return RealInterval::from_decimal(s);
    } catch (const PreconditionViolated&) {
        throw;
    } catch (const std::exception&) {
        throw PreconditionViolated("not a real literal: '" + s + "'");
    }
}

double parse_real_double(const std::string& s) { return parse_real(s).to_double(); }

namespace {

const std::string& as_real_string(const json& v, const std::string& key) {
    if (!v.is_string()) throw PreconditionViolated("'" + key + "' must be a decimal string, e.g. \"0.5\"");
    return v.get_ref<const std::string&>();
}

template <class T>
void take(const json& j, const char* key, T& dst) {
    if (!j.contains(key)) return;
    try {
        dst = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw PreconditionViolated(std::string("bad value for '") + key + "': " + e.what());
    }
}

void take_real(const json& j, const char* key, std::string& dst) {
    if (j.contains(key)) {
        dst = as_real_string(j.at(key), key);
        parse_real(dst);
    }
}

} // namespace

double ExperimentConfig::real(const std::string& key, const std::string& def) const {
    if (!params.contains(key)) return parse_real_double(def);
    return parse_real_double(as_real_string(params.at(key), key));
}

std::string ExperimentConfig::text(const std::string& key, const std::string& def) const {
    if (!params.contains(key)) return def;
    require(params.at(key).is_string(), "'" + key + "' must be a string");
    return params.at(key).get<std::string>();
}

std::int64_t ExperimentConfig::integer(const std::string& key, std::int64_t def) const {
    if (!params.contains(key)) return def;
    require(params.at(key).is_number_integer(), "'" + key + "' must be an integer");
    return params.at(key).get<std::int64_t>();
}

std::vector<std::int64_t> ExperimentConfig::integers(const std::string& key, std::vector<std::int64_t> def) const {
    if (!params.contains(key)) return def;
    const json& v = params.at(key);
    require(v.is_array(), "'" + key + "' must be an array of integers");
    std::vector<std::int64_t> out;
    for (const auto& e : v) {
        require(e.is_number_integer(), "'" + key + "' must be an array of integers");
        out.push_back(e.get<std::int64_t>());
    }
    return out;
}

std::vector<std::string> ExperimentConfig::reals(const std::string& key, std::vector<std::string> def) const {
    if (!params.contains(key)) return def;
    const json& v = params.at(key);
    require(v.is_array(), "'" + key + "' must be an array of decimal strings");
    std::vector<std::string> out;
    for (const auto& e : v) {
        out.push_back(as_real_string(e, key));
        parse_real(out.back());
    }
    return out;
}

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"th11",       "th12",        "th13",  "effective_probe",
                                                "expsum_grid", "sieve_grid", "dioph", "period"};
    return names;
}

std::string experiment_for_command(const std::string& cmd) {
    if (cmd == "probe") return "effective_probe";
    if (cmd == "expsum") return "expsum_grid";
    if (cmd == "sieve") return "sieve_grid";
    for (const auto& n : experiment_names())
        if (n == cmd) return n;
    throw PreconditionViolated("unknown experiment '" + cmd + "'");
}

ExperimentConfig parse_config(const json& j) {
    require(j.is_object(), "config must be a JSON object");
    ExperimentConfig c;
    take(j, "experiment", c.experiment);
    if (j.contains("point")) {
        const json& p = j.at("point");
        take(p, "kind", c.point.kind);
        take_real(p, "x", c.point.x);
        take(p, "p", c.point.p);
        take(p, "q", c.point.q);
        take(p, "mu", c.point.mu);
        take(p, "levels", c.point.levels);
        take(p, "prefix", c.point.prefix);
        if (p.contains("matrix")) {
            c.point.matrix.clear();
            require(p.at("matrix").is_array(), "point.matrix must be an array");
            for (const auto& e : p.at("matrix")) c.point.matrix.push_back(as_real_string(e, "matrix"));
        }
        take_real(p, "s", c.point.s);
        take_real(p, "alpha", c.point.alpha);
    }
    if (j.contains("sequence")) {
        const json& s = j.at("sequence");
        take(s, "kind", c.sequence.kind);
        take_real(s, "c", c.sequence.c);
        take_real(s, "gamma", c.sequence.gamma);
        take_real(s, "alpha", c.sequence.alpha);
        take(s, "L", c.sequence.L);
    }
    take(j, "n_schedule", c.n_schedule);
    take(j, "max_n", c.max_n);
    take(j, "test_functions", c.test_functions);
    if (j.contains("coverage")) {
        const json& g = j.at("coverage");
        take(g, "nx", c.coverage.nx);
        take(g, "ny", c.coverage.ny);
        take_real(g, "x_lo", c.coverage.x_lo);
        take_real(g, "x_hi", c.coverage.x_hi);
        take_real(g, "y_lo", c.coverage.y_lo);
        take_real(g, "y_hi", c.coverage.y_hi);
    }
    if (j.contains("params")) {
        require(j.at("params").is_object(), "params must be an object");
        c.params = j.at("params");
    }
    take(j, "out", c.out);
    take(j, "threads", c.threads);
    take(j, "seed", c.seed);
    for (const auto& [key, value] : j.items()) {
        static const std::vector<std::string> known{"experiment",     "point",    "sequence", "n_schedule",
                                                    "max_n",          "test_functions", "coverage", "params",
                                                    "out",            "threads",  "seed"};
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw PreconditionViolated("unknown config key '" + key + "'");
        (void)value;
    }
    validate(c);
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionViolated("cannot open config " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw PreconditionViolated(path + ": " + e.what());
    }
    return parse_config(j);
}

json to_json(const ExperimentConfig& c) {
    json j;
    j["experiment"] = c.experiment;
    j["point"] = {{"kind", c.point.kind}, {"x", c.point.x},         {"p", c.point.p},
                  {"q", c.point.q},       {"mu", c.point.mu},       {"levels", c.point.levels},
                  {"prefix", c.point.prefix}, {"matrix", c.point.matrix}, {"s", c.point.s},
                  {"alpha", c.point.alpha}};
    j["sequence"] = {{"kind", c.sequence.kind},   {"c", c.sequence.c}, {"gamma", c.sequence.gamma},
                     {"alpha", c.sequence.alpha}, {"L", c.sequence.L}};
    j["n_schedule"] = c.n_schedule;
    j["max_n"] = c.max_n;
    j["test_functions"] = c.test_functions;
    j["coverage"] = {{"nx", c.coverage.nx},     {"ny", c.coverage.ny},     {"x_lo", c.coverage.x_lo},
                     {"x_hi", c.coverage.x_hi}, {"y_lo", c.coverage.y_lo}, {"y_hi", c.coverage.y_hi}};
    j["params"] = c.params;
    j["out"] = c.out;
    j["threads"] = c.threads;
    j["seed"] = c.seed;
    return j;
}

void validate(const ExperimentConfig& c) {
    if (!c.experiment.empty()) experiment_for_command(c.experiment);
    for (std::size_t i = 1; i < c.n_schedule.size(); ++i)
        require(c.n_schedule[i] > c.n_schedule[i - 1], "n_schedule must be strictly increasing");
    require(c.n_schedule.empty() || c.n_schedule.front() >= 1, "n_schedule entries must be >= 1");
    require(c.max_n >= 1, "max_n must be >= 1");
    require(c.threads >= 0, "threads must be >= 0");
    static const std::vector<std::string> kinds{"identity", "real", "rational", "non_dioph", "group"};
    require(std::find(kinds.begin(), kinds.end(), c.point.kind) != kinds.end(),
            "point.kind must be identity, real, rational, non_dioph or group");
    if (c.point.kind == "group") require(c.point.matrix.size() == 4, "point.matrix needs four entries a b c d");
    if (c.point.kind == "rational") require(c.point.q >= 1, "point.q must be >= 1");
    static const std::vector<std::string> seqs{"power", "squares", "almost_primes"};
    require(std::find(seqs.begin(), seqs.end(), c.sequence.kind) != seqs.end(),
            "sequence.kind must be power, squares or almost_primes");
    if (c.experiment == "th11") {
        const double g = parse_real_double(c.sequence.gamma);
        require(g > 0 && g < 0.1, "th11 needs 0 < gamma < 0.1");
    }
    require(c.coverage.nx >= 4 && c.coverage.ny >= 4, "coverage grid needs >= 4 cells per axis");
}

} // namespace horolab
