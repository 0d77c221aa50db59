#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ddps/mcmc.hpp"
#include "ddps/metrics.hpp"
#include "ddps/net.hpp"
#include "ddps/pareto.hpp"
#include "ddps/problems.hpp"
#include "ddps/simplex.hpp"

namespace ddps {

enum class SamplingMode { DdpsMcmc, FixedDirichlet };

inline std::string_view to_string(SamplingMode m) {
    return m == SamplingMode::DdpsMcmc ? "ddps" : "fixed";
}

inline std::optional<SamplingMode> parse_mode(std::string_view s) {
    if (s == "ddps" || s == "ddps-mcmc" || s == "DDPS_MCMC") return SamplingMode::DdpsMcmc;
    if (s == "fixed" || s == "fixed-dirichlet" || s == "FixedDirichlet") return SamplingMode::FixedDirichlet;
    return std::nullopt;
}

/// Raised when training produces a non-finite loss or gradient.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct TrainConfig {
    std::size_t epochs = 1000;
    std::size_t n_prefs = 100;  // preferences sampled per epoch (N)
    double gamma = 0.4;
    std::size_t kappa = 4;
    McmcConfig mcmc{};
    ScalarizationSpec scalarization{};
    OptHyper opt{};
    std::uint64_t seed = 1;
    SamplingMode mode = SamplingMode::DdpsMcmc;
    std::vector<double> fixed_alpha;  // FixedDirichlet concentration; empty means all ones
    std::size_t early_stop_patience = 50;  // 0 disables early stopping
    std::size_t warmup_epochs = 1;
    std::size_t update_every = 1;
    std::size_t pref_batch = 1;
    std::size_t hidden = 256;
    std::size_t front_size = 0;  // 0 selects the problem default
    // Selection keeps floor(gamma * p * N) rows at epoch p; when false the
    // epoch factor is dropped and floor(gamma * N) rows are kept every epoch.
    bool epoch_scaled_selection = true;

    void validate() const {
        if (epochs < 1) throw std::invalid_argument("TrainConfig: epochs must be >= 1");
        if (n_prefs < 2) throw std::invalid_argument("TrainConfig: n_prefs must be >= 2");
        if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("TrainConfig: gamma must lie in (0, 1)");
        if (kappa < 1) throw std::invalid_argument("TrainConfig: kappa must be >= 1");
        if (warmup_epochs < 1) throw std::invalid_argument("TrainConfig: warmup_epochs must be >= 1");
        if (update_every < 1) throw std::invalid_argument("TrainConfig: update_every must be >= 1");
        if (pref_batch < 1) throw std::invalid_argument("TrainConfig: pref_batch must be >= 1");
        if (hidden < 1) throw std::invalid_argument("TrainConfig: hidden must be >= 1");
        for (double a : fixed_alpha)
            if (!(a > 0.0)) throw std::invalid_argument("TrainConfig: fixed_alpha entries must be positive");
        McmcConfig m = mcmc;
        m.kappa = kappa;
        m.validate();
    }

    [[nodiscard]] McmcConfig mcmc_config() const {
        McmcConfig m = mcmc;
        m.kappa = kappa;
        return m;
    }
};

struct EpochRecord {
    std::size_t epoch = 0;
    double hv = 0.0;
    double igd = 0.0;
    double mean_loss = 0.0;
    std::optional<double> acceptance_rate;  // set when the mixture was refit after this epoch
    std::size_t selected = 0;
    bool mcmc_never_moved = false;
    DirichletMixture mixture;  // sampling mixture in force after this epoch
};

struct RunRecord {
    std::string problem;
    std::size_t d = 0;
    std::size_t m = 0;
    SamplingMode mode = SamplingMode::DdpsMcmc;
    std::uint64_t seed = 0;
    TrainConfig config;
    std::vector<EpochRecord> epochs;
    std::size_t best_epoch = 0;
    double final_hv = 0.0;
    double final_igd = 0.0;
    std::size_t mcmc_fits = 0;
    std::vector<std::string> warnings;
    std::string checkpoint;  // path, filled in by whoever saves the parameters
    double wall_clock_seconds = 0.0;

    // Not serialized: best parameters and their non-dominated outputs on the grid.
    MlpParams params;
    std::vector<ObjectiveVector> front;
    DirichletMixture final_mixture;  // sampling mixture when training ended
};

/// Uniform simplex lattice used for evaluation: 100 points for m = 2 and
/// 105 points (13 divisions) for m = 3.
inline std::vector<PreferenceVector> evaluation_grid(std::size_t m) {
    std::vector<PreferenceVector> grid;
    if (m == 2) {
        for (std::size_t i = 0; i < 100; ++i) {
            const double t = static_cast<double>(i) / 99.0;
            grid.emplace_back(std::vector<double>{t, 1.0 - t});
        }
    } else if (m == 3) {
        for (const auto& p : detail::simplex_lattice3(13)) grid.emplace_back(p);
    } else {
        throw std::invalid_argument("evaluation_grid: only 2 or 3 objectives are supported");
    }
    return grid;
}

/// Derives an independent stream for one purpose (initialization, preference
/// sampling, MCMC) from the run seed.
inline RandomStream make_stream(std::uint64_t seed, std::uint32_t purpose) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), purpose};
    return RandomStream(seq);
}

struct EpochResult {
    LossMatrix losses;
    double mean_loss = 0.0;
};

/// One pass: sample N preferences from `mix`, take one optimizer step per
/// preference (or per `pref_batch` preferences), and collect the objective
/// vectors observed before each step.
template <typename Rng>
EpochResult run_epoch(MlpParams& params, OptState& opt, const DirichletMixture& mix, const TrainConfig& cfg,
                      const ProblemSpec& problem, Rng& rng) {
    auto prefs = sample_mixture(mix, cfg.n_prefs, rng);
    std::shuffle(prefs.begin(), prefs.end(), rng);
    EpochResult out;
    out.losses.rows.reserve(prefs.size());
    out.losses.prefs.reserve(prefs.size());
    std::vector<double> grad_sum(params.theta.size(), 0.0);
    std::size_t in_batch = 0;
    double total = 0.0;
    const auto step = [&](std::span<const double> g) {
        try {
            optimizer_update(params, g, opt, cfg.opt);
        } catch (const std::domain_error& e) {
            throw NumericalError(e.what());
        }
    };
    for (std::size_t i = 0; i < prefs.size(); ++i) {
        LossGrad lg;
        try {
            lg = loss_and_grad(params, prefs[i], cfg.scalarization, problem);
        } catch (const std::domain_error& e) {
            throw NumericalError(std::string("preference ") + std::to_string(i) + " of the epoch: " + e.what());
        }
        if (!std::isfinite(lg.loss))
            throw NumericalError("non-finite loss at preference " + std::to_string(i) + " of the epoch");
        total += lg.loss;
        out.losses.rows.push_back(std::move(lg.objectives));
        out.losses.prefs.emplace_back(prefs[i].values().begin(), prefs[i].values().end());
        if (cfg.pref_batch == 1) {
            step(lg.grad);
            continue;
        }
        for (std::size_t k = 0; k < grad_sum.size(); ++k) grad_sum[k] += lg.grad[k];
        if (++in_batch == cfg.pref_batch || i + 1 == prefs.size()) {
            for (double& g : grad_sum) g /= static_cast<double>(in_batch);
            step(grad_sum);
            std::fill(grad_sum.begin(), grad_sum.end(), 0.0);
            in_batch = 0;
        }
    }
    out.mean_loss = total / static_cast<double>(prefs.size());
    return out;
}

struct UpdateResult {
    DirichletMixture mixture;
    ChainDiagnostics diagnostics;
    std::size_t selected = 0;
    std::optional<std::string> warning;
};

/// Normalized rows of the NDS-CD selection, ready to serve as MCMC observations.
/// Losses are taken relative to `origin` (the scalarization's ideal point),
/// selection ranks those rows, and observations are the selected rows
/// projected onto the simplex.
inline SelectedSet select_observations(const LossMatrix& d, double gamma, std::size_t epoch,
                                       std::span<const double> origin = {}) {
    d.validate();
    std::vector<Row> rel = d.rows;
    if (!origin.empty()) {
        if (origin.size() != d.cols()) throw std::invalid_argument("select_observations: origin dimension mismatch");
        for (auto& r : rel)
            for (std::size_t k = 0; k < r.size(); ++k) r[k] -= origin[k];
    }
    const LossMatrix shifted{shift_nonnegative(std::move(rel)), {}};
    const LossMatrix normalized = normalize_rows(shifted);
    SelectedSet chosen = nds_cd_select(shifted, gamma, epoch);
    for (std::size_t i = 0; i < chosen.size(); ++i) chosen.rows[i] = normalized.rows[chosen.indices[i]];
    return chosen;
}

/// Refit the sampling mixture from one epoch of losses.
template <typename Rng>
UpdateResult ddps_update(const LossMatrix& d, const DirichletMixture& mix_prev, const TrainConfig& cfg,
                         std::size_t epoch, Rng& rng) {
    if (epoch < cfg.warmup_epochs) throw std::invalid_argument("ddps_update: called during warmup");
    const SelectedSet obs = select_observations(d, cfg.gamma, cfg.epoch_scaled_selection ? epoch : 1,
                                                cfg.scalarization.ideal_point);
    MixtureFit fit = fit_mixture(obs, mix_prev, cfg.mcmc_config(), rng);
    UpdateResult out{std::move(fit.mixture), fit.diagnostics, obs.size(), std::nullopt};
    if (out.diagnostics.never_moved)
        out.warning = "epoch " + std::to_string(epoch) + ": MCMC rejected every proposal; mixture kept";
    return out;
}

struct GridEvaluation {
    double hv = 0.0;
    double igd = 0.0;
    std::vector<ObjectiveVector> front;
};

inline GridEvaluation evaluate_on_grid(const MlpParams& params, const ProblemSpec& problem,
                                       const std::vector<PreferenceVector>& grid,
                                       const std::vector<ObjectiveVector>& reference) {
    std::vector<Row> outputs;
    outputs.reserve(grid.size());
    for (const auto& r : grid) outputs.push_back(evaluate(problem, forward_trace(params, r.values()).output));
    GridEvaluation ev;
    ev.front = non_dominated_subset(outputs);
    ev.hv = hypervolume(ev.front, problem.hv_reference());
    ev.igd = igd(ev.front, reference);
    return ev;
}

inline DirichletMixture initial_mixture(const TrainConfig& cfg, std::size_t m) {
    if (cfg.mode == SamplingMode::FixedDirichlet) {
        std::vector<double> alpha = cfg.fixed_alpha.empty() ? std::vector<double>(m, 1.0) : cfg.fixed_alpha;
        if (alpha.size() != m) throw std::invalid_argument("fixed_alpha length does not match objective count");
        return {{DirichletParams(std::move(alpha))}, {1.0}};
    }
    return DirichletMixture::uniform(m, cfg.kappa);
}

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Full training loop. Warmup epochs sample from the uniform mixture; after
/// each later epoch (every `update_every`) the mixture is refit from that
/// epoch's losses. Every epoch is scored on the fixed evaluation grid and the
/// parameters with the best hypervolume are kept.
inline RunRecord train(const TrainConfig& config, const ProblemSpec& problem, const EpochCallback& on_epoch = {}) {
    config.validate();
    problem.validate();
    TrainConfig cfg = config;
    if (cfg.scalarization.ideal_point.empty()) cfg.scalarization.ideal_point = ideal_point(problem);
    const auto started = std::chrono::steady_clock::now();

    RunRecord rec;
    rec.problem = std::string(to_string(problem.name));
    rec.d = problem.d;
    rec.m = problem.m;
    rec.mode = cfg.mode;
    rec.seed = cfg.seed;
    rec.config = cfg;

    RandomStream init_rng = make_stream(cfg.seed, 0);
    RandomStream pref_rng = make_stream(cfg.seed, 1);
    RandomStream mcmc_rng = make_stream(cfg.seed, 2);

    MlpParams params = MlpParams::init(default_widths(problem.m, problem.d, cfg.hidden), init_rng);
    OptState opt;
    const auto grid = evaluation_grid(problem.m);
    const auto reference =
        true_front(problem, cfg.front_size ? cfg.front_size : problem.default_front_size());

    DirichletMixture mix = initial_mixture(cfg, problem.m);
    double best_hv = -1.0;
    for (std::size_t t = 1; t <= cfg.epochs; ++t) {
        EpochResult er = run_epoch(params, opt, mix, cfg, problem, pref_rng);
        EpochRecord erec;
        erec.epoch = t;
        erec.mean_loss = er.mean_loss;

        GridEvaluation ev = evaluate_on_grid(params, problem, grid, reference);
        erec.hv = ev.hv;
        erec.igd = ev.igd;
        if (ev.hv > best_hv) {
            best_hv = ev.hv;
            rec.best_epoch = t;
            rec.final_hv = ev.hv;
            rec.final_igd = ev.igd;
            rec.params = params;
            rec.front = std::move(ev.front);
        }

        const bool stop = cfg.early_stop_patience > 0 && t - rec.best_epoch >= cfg.early_stop_patience;
        const bool refit = cfg.mode == SamplingMode::DdpsMcmc && t >= cfg.warmup_epochs && t < cfg.epochs &&
                           !stop && (t - cfg.warmup_epochs) % cfg.update_every == 0;
        if (refit) {
            UpdateResult up = ddps_update(er.losses, mix, cfg, t, mcmc_rng);
            ++rec.mcmc_fits;
            erec.acceptance_rate = up.diagnostics.acceptance_rate;
            erec.selected = up.selected;
            erec.mcmc_never_moved = up.diagnostics.never_moved;
            if (up.warning) rec.warnings.push_back(*up.warning);
            mix = std::move(up.mixture);
        }
        erec.mixture = mix;
        rec.epochs.push_back(erec);
        if (on_epoch) on_epoch(rec.epochs.back());
        if (stop) break;
    }
    rec.final_mixture = mix;
    rec.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return rec;
}

}  // namespace ddps
