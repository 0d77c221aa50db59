#pragma once

// Batch execution: one output directory per run, optional worker threads.

#include <atomic>
#include <exception>
#include <filesystem>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ddps/config.hpp"
#include "ddps/report.hpp"
#include "ddps/trainer.hpp"

namespace ddps {

/// A run that aborted; carries the run id and whether the cause was numerical.
class RunFailure : public std::runtime_error {
public:
    RunFailure(std::string run_id, bool numerical, const std::string& what)
        : std::runtime_error("run '" + run_id + "' failed: " + what), run_id_(std::move(run_id)), numerical_(numerical) {}
    [[nodiscard]] const std::string& run_id() const { return run_id_; }
    [[nodiscard]] bool numerical() const { return numerical_; }

private:
    std::string run_id_;
    bool numerical_;
};

struct RunOptions {
    std::filesystem::path out_dir = "runs";
    bool plots = true;
    std::size_t jobs = 1;
    std::ostream* log = nullptr;  // progress lines; null is silent
};

struct RunOutput {
    RunSpec spec;
    std::filesystem::path dir;
    RunRecord record;
};

/// Trains one run and writes run.json, front.csv, checkpoint.bin and,
/// with plots on, front.svg into `out_dir / spec.id`.
inline RunOutput execute_run(const RunSpec& spec, const std::filesystem::path& out_dir, bool plots) {
    namespace fs = std::filesystem;
    RunOutput out{spec, out_dir / spec.id, {}};
    fs::create_directories(out.dir);
    try {
        out.record = train(spec.config, spec.problem);
    } catch (const NumericalError& e) {
        throw RunFailure(spec.id, true, e.what());
    } catch (const std::domain_error& e) {
        throw RunFailure(spec.id, true, e.what());
    }
    out.record.checkpoint = "checkpoint.bin";
    {
        std::ofstream os(out.dir / "checkpoint.bin", std::ios::binary);
        if (!os) throw RunFailure(spec.id, false, "cannot write checkpoint");
        save_checkpoint(os, out.record.params);
    }
    write_text_file(out.dir / "run.json", run_to_json(out.record, spec.id).dump(2) + "\n");
    write_text_file(out.dir / "front.csv", to_csv(front_table(out.record.front, spec.problem.m)));
    if (plots) {
        const auto truth = true_front(spec.problem, spec.problem.m == 2 ? 1000 : 2000);
        std::ostringstream title;
        title << spec.id << "  HV " << format_real(out.record.final_hv).substr(0, 8) << "  IGD "
              << format_real(out.record.final_igd).substr(0, 8);
        write_text_file(out.dir / "front.svg", front_svg(out.record.front, truth, spec.problem.m, title.str()));
    }
    return out;
}

/// Runs every spec, `jobs` at a time. Results keep the input order. The first
/// failure stops further scheduling and is rethrown after in-flight runs end.
inline std::vector<RunOutput> execute_all(const std::vector<RunSpec>& specs, const RunOptions& opt) {
    std::filesystem::create_directories(opt.out_dir);
    std::vector<RunOutput> results(specs.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex mu;

    auto worker = [&] {
        for (;;) {
            if (failed.load()) return;
            const std::size_t i = next.fetch_add(1);
            if (i >= specs.size()) return;
            try {
                results[i] = execute_run(specs[i], opt.out_dir, opt.plots);
                if (opt.log) {
                    std::lock_guard lock(mu);
                    const auto& r = results[i].record;
                    *opt.log << "[" << (i + 1) << "/" << specs.size() << "] " << specs[i].id << ": hv "
                             << r.final_hv << " igd " << r.final_igd << " epochs " << r.epochs.size() << " ("
                             << r.wall_clock_seconds << " s)\n";
                }
            } catch (...) {
                std::lock_guard lock(mu);
                if (!first_error) first_error = std::current_exception();
                failed = true;
                return;
            }
        }
    };

    const std::size_t n_threads = std::max<std::size_t>(1, std::min(opt.jobs, specs.size()));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

enum class AblationKind { Gamma, Kappa };

inline std::optional<AblationKind> parse_ablation_kind(std::string_view s) {
    if (s == "gamma") return AblationKind::Gamma;
    if (s == "kappa") return AblationKind::Kappa;
    return std::nullopt;
}

/// One copy of every run per grid value, with the value applied and appended to the id.
inline std::vector<RunSpec> ablation_specs(const std::vector<RunSpec>& base, AblationKind kind,
                                           const std::vector<double>& grid) {
    if (grid.empty()) throw ConfigError("ablation grid is empty");
    std::vector<RunSpec> out;
    for (double v : grid) {
        for (const auto& b : base) {
            RunSpec r = b;
            if (kind == AblationKind::Gamma) {
                r.config.gamma = v;
                r.id += "-gamma" + format_real(v);
            } else {
                if (!(v >= 1.0) || v != std::floor(v)) throw ConfigError("kappa grid values must be positive integers");
                r.config.kappa = static_cast<std::size_t>(v);
                r.id += "-kappa" + format_real(v);
            }
            try {
                r.config.validate();
            } catch (const std::invalid_argument& e) {
                throw ConfigError("run '" + r.id + "': " + e.what());
            }
            out.push_back(std::move(r));
        }
    }
    return out;
}

/// Sweep CSV with one row per run: value, problem, mode, seed, hv, igd.
inline CsvTable ablation_table(const std::vector<RunOutput>& runs, AblationKind kind) {
    CsvTable t;
    t.header = {kind == AblationKind::Gamma ? "gamma" : "kappa", "problem", "mode", "seed", "hv", "igd"};
    for (const auto& r : runs) {
        const double v = kind == AblationKind::Gamma ? r.spec.config.gamma : static_cast<double>(r.spec.config.kappa);
        t.rows.push_back({format_real(v), r.record.problem, std::string(to_string(r.record.mode)),
                          std::to_string(r.record.seed), format_real(r.record.final_hv),
                          format_real(r.record.final_igd)});
    }
    return t;
}

}  // namespace ddps
