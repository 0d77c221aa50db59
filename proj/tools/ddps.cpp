// Command-line front end: run, table, ablate.
//
// Exit codes: 0 success, 1 I/O or unexpected failure, 2 invalid
// configuration, 3 numerical abort.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ddps/config.hpp"
#include "ddps/report.hpp"
#include "ddps/runner.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct BatchFlags {
    std::string config;
    std::string out;
    std::string seeds;
    std::optional<bool> plots;
    std::optional<std::size_t> jobs;
};

void add_batch_flags(CLI::App* cmd, BatchFlags& f) {
    cmd->add_option("--config", f.config, "experiment config file")->required();
    cmd->add_option("--out", f.out, "output directory (overrides [experiment] out)");
    cmd->add_option("--seeds", f.seeds, "comma-separated seeds (overrides config and DDPS_SEED)");
    cmd->add_option("--plots", f.plots, "write SVG plots (true/false)");
    cmd->add_option("--jobs", f.jobs, "parallel runs")->check(CLI::PositiveNumber);
}

// Loads the config and applies flag and environment overrides.
std::pair<ddps::ExperimentConfig, ddps::RunOptions> resolve(const BatchFlags& f) {
    ddps::ExperimentConfig cfg = ddps::load_experiment(f.config);
    if (!f.seeds.empty()) {
        cfg.override_seeds(ddps::parse_seed_list(f.seeds));
    } else if (const char* env = std::getenv("DDPS_SEED"); env && *env) {
        cfg.override_seeds(ddps::parse_seed_list(env));
    }
    ddps::RunOptions opt;
    opt.out_dir = f.out.empty() ? fs::path(cfg.out_dir) : fs::path(f.out);
    opt.plots = f.plots.value_or(cfg.plots);
    opt.jobs = f.jobs.value_or(cfg.jobs);
    opt.log = &std::cerr;
    return {std::move(cfg), opt};
}

int cmd_run(const BatchFlags& f) {
    auto [cfg, opt] = resolve(f);
    const auto specs = cfg.expand();
    std::cerr << "running " << specs.size() << " run(s) into " << opt.out_dir.string() << "\n";
    ddps::execute_all(specs, opt);
    return 0;
}

int cmd_ablate(const BatchFlags& f, const std::string& kind_name, const std::string& grid_text) {
    const auto kind = ddps::parse_ablation_kind(kind_name);
    if (!kind) throw ddps::ConfigError("--kind must be gamma or kappa");
    std::vector<double> grid;
    for (const auto& item : ddps::detail::split_list(grid_text)) grid.push_back(ddps::detail::parse_real("grid", item));
    auto [cfg, opt] = resolve(f);
    const auto specs = ddps::ablation_specs(cfg.expand(), *kind, grid);
    std::cerr << "ablating " << kind_name << " over " << grid.size() << " value(s): " << specs.size() << " run(s)\n";
    const auto results = ddps::execute_all(specs, opt);
    if (*kind == ddps::AblationKind::Kappa && opt.plots) {
        for (const auto& r : results) {
            if (r.spec.problem.m != 2 && r.spec.problem.m != 3) continue;
            ddps::write_text_file(r.dir / "mixture.svg",
                                  ddps::mixture_heatmap_svg(r.record.final_mixture,
                                                            r.spec.id + "  kappa " + std::to_string(r.spec.config.kappa)));
        }
    }
    const std::string csv = ddps::to_csv(ddps::ablation_table(results, *kind));
    ddps::write_text_file(opt.out_dir / ("sweep_" + kind_name + ".csv"), csv);
    std::cout << csv;
    return 0;
}

int cmd_table(const std::vector<std::string>& dirs, const std::string& out) {
    std::vector<fs::path> files;
    for (const auto& d : dirs) {
        const fs::path p(d);
        if (fs::is_regular_file(p / "run.json")) {
            files.push_back(p / "run.json");
        } else if (fs::is_directory(p)) {
            std::vector<fs::path> found;
            for (const auto& entry : fs::directory_iterator(p))
                if (entry.is_directory() && fs::is_regular_file(entry.path() / "run.json"))
                    found.push_back(entry.path() / "run.json");
            if (found.empty()) std::cerr << "warning: no run.json under " << d << ", skipped\n";
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else {
            std::cerr << "warning: " << d << " is not a directory, skipped\n";
        }
    }
    std::vector<ddps::RunSummary> runs;
    for (const auto& file : files) {
        try {
            runs.push_back(ddps::read_run_summary(file));
        } catch (const std::exception& e) {
            std::cerr << "warning: " << file.string() << ": " << e.what() << ", skipped\n";
        }
    }
    if (runs.empty()) {
        std::cerr << "error: no readable runs\n";
        return kExitIo;
    }
    const std::string runs_csv = ddps::to_csv(ddps::runs_table(runs));
    const std::string summary_csv = ddps::to_csv(ddps::summary_table(runs));
    if (!out.empty()) {
        fs::create_directories(out);
        ddps::write_text_file(fs::path(out) / "runs.csv", runs_csv);
        ddps::write_text_file(fs::path(out) / "summary.csv", summary_csv);
    }
    std::cout << runs_csv << "\n" << summary_csv;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Preference-conditioned Pareto front learning with adaptive preference sampling"};
    app.require_subcommand(1);

    BatchFlags run_flags;
    auto* run = app.add_subcommand("run", "train every run of an experiment config");
    add_batch_flags(run, run_flags);

    std::vector<std::string> table_dirs;
    std::string table_out;
    auto* table = app.add_subcommand("table", "summarize finished runs as CSV");
    table->add_option("dirs", table_dirs, "run directories or parents of run directories")->required();
    table->add_option("--out", table_out, "also write runs.csv and summary.csv here");

    BatchFlags ablate_flags;
    std::string kind;
    std::string grid;
    auto* ablate = app.add_subcommand("ablate", "sweep gamma or kappa over a base config");
    add_batch_flags(ablate, ablate_flags);
    ablate->add_option("--kind", kind, "gamma or kappa")->required();
    ablate->add_option("--grid", grid, "comma-separated values")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run) return cmd_run(run_flags);
        if (*table) return cmd_table(table_dirs, table_out);
        if (*ablate) return cmd_ablate(ablate_flags, kind, grid);
    } catch (const ddps::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ddps::RunFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.numerical() ? kExitNumerical : kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return 0;
}
