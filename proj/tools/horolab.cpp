// horolab <experiment> --config <file.json> [--out <dir>] [--threads <n>] [--max-n <int>]
//
// Exit codes: 0 ran, 2 precondition rejected, 3 schedule clamped,
// 4 numeric certificate failure, 1 anything else (IO, bad CLI).

#include <iostream>

#include <CLI11.hpp>

#include "horolab/config.hpp"
#include "horolab/emit.hpp"
#include "horolab/error.hpp"
#include "horolab/experiments.hpp"
#include "horolab/reduce.hpp"
#include "horolab/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"horocycle orbit experiments"};
    app.set_version_flag("--version", std::string(horolab::kVersion));
    app.require_subcommand(1);

    std::string config_path, out_dir, format = "both";
    int threads = -1;
    std::uint64_t max_n = 0;
    const std::vector<std::string> commands{"th11", "th12", "th13", "probe", "expsum", "sieve", "dioph", "period"};
    for (const auto& name : commands) {
        CLI::App* sub = app.add_subcommand(name, "run the " + horolab::experiment_for_command(name) + " experiment");
        sub->add_option("--config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory (overrides config)");
        sub->add_option("--threads", threads, "OpenMP threads, 0 = runtime default")->check(CLI::NonNegativeNumber);
        sub->add_option("--max-n", max_n, "schedule cap (overrides config)")->check(CLI::PositiveNumber);
        sub->add_option("--format", format, "csv, json or both")->check(CLI::IsMember({"csv", "json", "both"}));
    }
    CLI11_PARSE(app, argc, argv);
    const std::string cmd = app.get_subcommands().front()->get_name();

    try {
        horolab::ExperimentConfig cfg = horolab::load_config(config_path);
        const std::string want = horolab::experiment_for_command(cmd);
        if (cfg.experiment.empty()) cfg.experiment = want;
        horolab::require(horolab::experiment_for_command(cfg.experiment) == want,
                         "config is for '" + cfg.experiment + "', not '" + cmd + "'");
        if (!out_dir.empty()) cfg.out = out_dir;
        if (threads >= 0) cfg.threads = threads;
        if (max_n > 0) cfg.max_n = max_n;
        if (cfg.threads > 0) horolab::set_thread_count(cfg.threads);

        const horolab::DensityReport rep = horolab::run_experiment(cfg);
        horolab::emit(rep, cfg, cfg.out, format);
        for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
        for (const auto& [name, ok] : rep.verdicts) std::cout << name << ": " << (ok ? "yes" : "no") << "\n";
        const std::string ext = format == "both" ? ".{csv,json}" : "." + format;
        std::cout << "wrote " << cfg.out << "/" << rep.experiment << ext << "\n";
        if (rep.clamped) {
            std::cerr << "schedule clamped at max_n; results are for the clamped schedule\n";
            return 3;
        }
        return 0;
    } catch (const horolab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.error_class());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
