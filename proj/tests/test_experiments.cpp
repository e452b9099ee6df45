#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "horolab/config.hpp"
#include "horolab/emit.hpp"
#include "horolab/error.hpp"
#include "horolab/experiments.hpp"

using namespace horolab;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("horolab_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(HOROLAB_CLI) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

json th11_json(const std::string& x) {
    return json{{"experiment", "th11"},
                {"point", {{"kind", "real"}, {"x", x}}},
                {"sequence", {{"kind", "power"}, {"gamma", "0.05"}}},
                {"n_schedule", {1000, 10000}},
                {"test_functions", {"one", "y_gt_2"}}};
}

} // namespace

TEST_SUITE("experiments") {
    TEST_CASE("config round trip and rejection") {
        for (const auto& name : {"th11", "th12", "th13", "probe", "expsum", "sieve", "dioph", "period"}) {
            const auto cfg = load_config(std::string(HOROLAB_SOURCE_DIR) + "/configs/" + name + ".json");
            CHECK(parse_config(to_json(cfg)) == cfg);
            CHECK_NOTHROW(validate(cfg));
        }
        auto j = th11_json("sqrt(2)-1");
        j["bogus"] = 1;
        CHECK_THROWS_AS(parse_config(j), PreconditionViolated);
        j = th11_json("sqrt(2)-1");
        j["point"]["x"] = 0.41;  // reals must be strings
        CHECK_THROWS_AS(parse_config(j), PreconditionViolated);
        j = th11_json("sqrt(2)-1");
        j["sequence"]["gamma"] = "0.1";
        CHECK_THROWS(validate(parse_config(j)));
        j = th11_json("sqrt(2)-1");
        j["n_schedule"] = {1000, 1000};
        CHECK_THROWS(validate(parse_config(j)));
    }

    TEST_CASE("real literals") {
        CHECK(parse_real_double("7/19") == doctest::Approx(7.0 / 19));
        CHECK(parse_real_double("sqrt(2)-1") == doctest::Approx(std::sqrt(2.0) - 1));
        CHECK(parse_real_double("golden") == doctest::Approx((1 + std::sqrt(5.0)) / 2));
        CHECK(parse_real_double("-3.5e-2") == doctest::Approx(-0.035));
        const auto r = parse_real("0.125");
        CHECK(r.lo < BigRational(1, 8));
        CHECK(r.hi > BigRational(1, 8));
        CHECK(parse_real("7/19").is_exact());
        CHECK_THROWS_AS(parse_real("pi"), PreconditionViolated);
    }

    TEST_CASE("th11 generic points") {
        const auto a = run_experiment(parse_config(th11_json("sqrt(2)-1")));
        const auto b = run_experiment(parse_config(th11_json("golden-1")));
        CHECK(a.verdicts == b.verdicts);
        CHECK(a.verdicts.at("one_exact"));
        CHECK_FALSE(a.verdicts.at("case2_approximable"));
        for (const auto& row : a.rows)
            if (row.test_fn == "one") CHECK(row.deficit == 0);
    }

    TEST_CASE("th12 with f = 0 is a vacuous failure") {
        json j{{"experiment", "th12"},
               {"point", {{"kind", "real"}, {"x", "sqrt(2)-1"}}},
               {"n_schedule", {10000}},
               {"test_functions", {"zero"}},
               {"params", {{"sieve_alpha", "0.125"}, {"sieve_s", "4"}, {"sieve_eps", "0.001"}}}};
        const auto rep = run_experiment(parse_config(j));
        CHECK_FALSE(rep.verdicts.at("almost_prime_sum_positive"));
        for (const auto& row : rep.rows)
            if (row.test_fn == "zero") CHECK(row.value == 0);
    }

    TEST_CASE("th13 rows per feasible level") {
        auto j = json::parse(slurp(fs::path(HOROLAB_SOURCE_DIR) / "configs/th13.json"));
        j["n_schedule"] = {1000, 10000};
        j["max_n"] = 10000;
        j["test_functions"] = {"one", "y_gt_2"};
        const auto rep = run_experiment(parse_config(j));
        CHECK(rep.clamped);
        std::set<std::string> levels;
        for (const auto& row : rep.rows) {
            levels.insert(row.level);
            if (row.test_fn == "one") CHECK(row.deficit == 0);
        }
        CHECK(levels.count("q=169/E") == 1);
        CHECK(levels.count("q=169/canonical") == 1);
        CHECK(rep.verdicts.at("x_type_100"));
        std::ostringstream csv;
        write_csv(rep, csv);
        std::istringstream lines(csv.str());
        std::string header;
        std::getline(lines, header);
        CHECK(header == std::string(kCsvHeader) + "\r");
    }

    TEST_CASE("empty report gives a header-only CSV") {
        DensityReport rep;
        rep.experiment = "th11";
        std::ostringstream csv;
        write_csv(rep, csv);
        CHECK(csv.str() == std::string(kCsvHeader) + "\r\n");
        CHECK(csv_field("a,b") == "\"a,b\"");
        CHECK(csv_field("say \"x\"") == "\"say \"\"x\"\"\"");
        CHECK(csv_field("plain") == "plain");
    }

    TEST_CASE("ratio fit") {
        const auto r = fit_ratio({1, 1, 1, 4});
        CHECK(r.constant == doctest::Approx(1));
        CHECK(r.bounded);
        CHECK_FALSE(fit_ratio({1, 1, 1, 6}).bounded);
    }

    TEST_CASE("CLI determinism and exit codes") {
        const fs::path d = scratch("cli");
        const std::string src = HOROLAB_SOURCE_DIR;
        CHECK(run_cli("th12 --config " + src + "/configs/th12_generic.json --out " + (d / "a").string()) == 0);
        CHECK(run_cli("th12 --config " + src + "/configs/th12_generic.json --out " + (d / "b").string()) == 0);
        CHECK(slurp(d / "a/th12.csv") == slurp(d / "b/th12.csv"));
        // the JSON echoes the config, whose only difference is the output directory
        auto ja = json::parse(slurp(d / "a/th12.json")), jb = json::parse(slurp(d / "b/th12.json"));
        ja["config"].erase("out");
        jb["config"].erase("out");
        CHECK(ja == jb);
        CHECK(!slurp(d / "a/th12.csv").empty());
        CHECK(run_cli("th12 --config " + src + "/configs/th12_generic.json --threads 1 --out " + (d / "c").string()) == 0);
        CHECK(slurp(d / "a/th12.csv") == slurp(d / "c/th12.csv"));

        auto bad = th11_json("sqrt(2)-1");
        bad["sequence"]["gamma"] = "0.1";
        std::ofstream(d / "bad.json") << bad.dump();
        CHECK(run_cli("th11 --config " + (d / "bad.json").string() + " --out " + (d / "x").string()) == 2);
        CHECK(run_cli("th12 --config " + src + "/configs/th11.json --out " + (d / "x").string()) == 2);
        CHECK(run_cli("th11 --config " + (d / "missing.json").string()) != 0);

        auto clamp = th11_json("sqrt(2)-1");
        clamp["max_n"] = 5000;
        std::ofstream(d / "clamp.json") << clamp.dump();
        CHECK(run_cli("th11 --config " + (d / "clamp.json").string() + " --out " + (d / "y").string()) == 3);
        CHECK(fs::exists(d / "y/th11.csv"));
        fs::remove_all(d);
    }
}
