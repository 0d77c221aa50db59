#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "ddps/pareto.hpp"
#include "ddps/simplex.hpp"

namespace ddps {

struct McmcConfig {
    std::size_t steps = 10000;  // chain length S
    double mu = 0.0;            // proposal/prior mean of log-alpha entries
    double sigma = 2.0;         // proposal/prior std-dev of log-alpha entries
    std::size_t kappa = 4;
    // Accept on the likelihood ratio alone. Proposals are drawn from the prior,
    // so this is the textbook independence-sampler ratio; the default keeps the
    // prior terms in the ratio as well.
    bool hastings_corrected = false;
    // Permute mixture components of each averaged state to match the first
    // state of the averaging window before accumulating.
    bool align_labels = true;

    void validate() const {
        if (steps < 2 || steps % 2 != 0) throw std::invalid_argument("McmcConfig: steps must be even and >= 2");
        if (!(sigma > 0.0)) throw std::invalid_argument("McmcConfig: sigma must be positive");
        if (kappa < 1) throw std::invalid_argument("McmcConfig: kappa must be >= 1");
    }
};

/// One MH proposal: kappa x m log-concentrations and mixture weights.
struct Proposal {
    std::size_t kappa = 0;
    std::size_t dim = 0;
    std::vector<double> log_alpha;  // row-major kappa x dim
    std::vector<double> weights;

    [[nodiscard]] std::span<const double> component(std::size_t c) const {
        return std::span<const double>(log_alpha).subspan(c * dim, dim);
    }

    [[nodiscard]] DirichletMixture to_mixture() const {
        std::vector<DirichletParams> comps;
        comps.reserve(kappa);
        for (std::size_t c = 0; c < kappa; ++c) {
            std::vector<double> a(dim);
            for (std::size_t k = 0; k < dim; ++k) a[k] = std::exp(log_alpha[c * dim + k]);
            comps.emplace_back(std::move(a));
        }
        return {std::move(comps), weights};
    }

    static Proposal from_mixture(const DirichletMixture& mix) {
        Proposal p{mix.kappa(), mix.dim(), {}, mix.weights()};
        p.log_alpha.reserve(p.kappa * p.dim);
        for (const auto& c : mix.components())
            for (double a : c.alpha()) p.log_alpha.push_back(std::log(a));
        return p;
    }

    /// Draw from the prior: iid N(mu, sigma) log-alphas and Dir(1, ..., 1) weights.
    template <typename Rng>
    static Proposal draw(std::size_t kappa, std::size_t dim, double mu, double sigma, Rng& rng) {
        Proposal p{kappa, dim, std::vector<double>(kappa * dim), {}};
        std::normal_distribution<double> normal(mu, sigma);
        for (double& v : p.log_alpha) v = normal(rng);
        const std::vector<double> ones(kappa, 1.0);
        p.weights = sample_simplex(ones, rng);
        return p;
    }
};

struct ChainState {
    Proposal accepted;
    double log_posterior = 0.0;
    double log_likelihood = 0.0;
    std::size_t step_index = 0;
    std::size_t accepted_moves = 0;
};

struct ChainDiagnostics {
    std::size_t steps = 0;
    std::size_t accepted = 0;
    double acceptance_rate = 0.0;
    std::size_t window_size = 0;
    bool never_moved = false;
    double first_half_mean_log_posterior = 0.0;
    double second_half_mean_log_posterior = 0.0;
};

/// Log posterior of mixture proposals given a fixed set of simplex observations.
/// Log-observations are cached once, so each evaluation is a kappa x m dot
/// product per observation.
class MixturePosterior {
  public:
    MixturePosterior(const std::vector<Row>& obs, double mu, double sigma) : mu_(mu), sigma_(sigma) {
        if (obs.empty()) throw std::invalid_argument("MixturePosterior: no observations");
        dim_ = obs.front().size();
        log_obs_.reserve(obs.size() * dim_);
        for (const auto& row : obs) {
            if (row.size() != dim_) throw std::invalid_argument("MixturePosterior: observation length mismatch");
            for (double x : row) {
                if (!(x > 0.0 && x < 1.0))
                    throw std::domain_error("MixturePosterior: observation outside the open simplex");
                log_obs_.push_back(std::log(x));
            }
        }
        n_ = obs.size();
    }

    [[nodiscard]] std::size_t size() const { return n_; }
    [[nodiscard]] std::size_t dim() const { return dim_; }

    [[nodiscard]] double log_likelihood(const Proposal& p) const {
        check(p);
        const std::size_t kappa = p.kappa;
        std::vector<double> base(kappa);
        std::vector<double> alpha(kappa * dim_);
        std::vector<char> live(kappa);
        for (std::size_t c = 0; c < kappa; ++c) {
            double total = 0.0;
            double norm = 0.0;
            for (std::size_t k = 0; k < dim_; ++k) {
                const double a = std::exp(p.log_alpha[c * dim_ + k]);
                alpha[c * dim_ + k] = a - 1.0;
                total += a;
                norm -= std::lgamma(a);
            }
            norm += std::lgamma(total);
            live[c] = p.weights[c] > 0.0;
            base[c] = live[c] ? std::log(p.weights[c]) + norm : 0.0;
        }
        std::vector<double> terms(kappa);
        double acc = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double* lx = &log_obs_[i * dim_];
            double top = -std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < kappa; ++c) {
                if (!live[c]) {
                    terms[c] = -std::numeric_limits<double>::infinity();
                    continue;
                }
                double t = base[c];
                for (std::size_t k = 0; k < dim_; ++k) t += alpha[c * dim_ + k] * lx[k];
                terms[c] = t;
                top = std::max(top, t);
            }
            double s = 0.0;
            for (std::size_t c = 0; c < kappa; ++c)
                if (live[c]) s += std::exp(terms[c] - top);
            acc += top + std::log(s);
        }
        return acc;
    }

    /// Normal prior on every log-alpha entry plus the uniform Dir(1..1) prior
    /// on the weights, whose log density is the constant lgamma(kappa).
    [[nodiscard]] double log_prior(const Proposal& p) const {
        check(p);
        const double log_norm = -std::log(sigma_) - 0.5 * std::log(2.0 * std::numbers::pi);
        double acc = 0.0;
        for (double v : p.log_alpha) {
            const double z = (v - mu_) / sigma_;
            acc += log_norm - 0.5 * z * z;
        }
        return acc + std::lgamma(static_cast<double>(p.kappa));
    }

    [[nodiscard]] double log_posterior(const Proposal& p) const { return log_likelihood(p) + log_prior(p); }

  private:
    void check(const Proposal& p) const {
        if (p.dim != dim_ || p.log_alpha.size() != p.kappa * p.dim || p.weights.size() != p.kappa)
            throw std::invalid_argument("MixturePosterior: proposal shape mismatch");
    }

    double mu_;
    double sigma_;
    std::size_t dim_ = 0;
    std::size_t n_ = 0;
    std::vector<double> log_obs_;
};

/// Likelihood x normal prior on log-alpha x uniform Dirichlet prior on weights, in log space.
inline double log_posterior(const Proposal& prop, const SelectedSet& obs, const McmcConfig& cfg) {
    if (obs.empty()) throw std::invalid_argument("log_posterior: empty observation set");
    return MixturePosterior(obs.rows, cfg.mu, cfg.sigma).log_posterior(prop);
}

inline ChainState make_chain_state(Proposal p, const MixturePosterior& post) {
    ChainState s;
    s.log_likelihood = post.log_likelihood(p);
    s.log_posterior = s.log_likelihood + post.log_prior(p);
    s.accepted = std::move(p);
    return s;
}

/// MH acceptance of a given candidate against the current state.
/// `log_u` is the log of a uniform(0,1) draw; accept iff log_u <= log ratio.
inline ChainState mh_accept(const ChainState& state, Proposal candidate, const MixturePosterior& post,
                            const McmcConfig& cfg, double log_u) {
    const double cand_ll = post.log_likelihood(candidate);
    const double cand_lp = cand_ll + post.log_prior(candidate);
    const double log_ratio =
        cfg.hastings_corrected ? cand_ll - state.log_likelihood : cand_lp - state.log_posterior;
    ChainState next = state;
    ++next.step_index;
    if (log_u <= log_ratio) {
        next.accepted = std::move(candidate);
        next.log_likelihood = cand_ll;
        next.log_posterior = cand_lp;
        ++next.accepted_moves;
    }
    return next;
}

/// One block independence-sampler step: the whole (log-alpha, weights) block
/// is re-proposed from the prior.
template <typename Rng>
ChainState mh_step(const ChainState& state, const MixturePosterior& post, const McmcConfig& cfg, Rng& rng) {
    Proposal candidate = Proposal::draw(state.accepted.kappa, state.accepted.dim, cfg.mu, cfg.sigma, rng);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double log_u = std::log(unif(rng));
    return mh_accept(state, std::move(candidate), post, cfg, log_u);
}

namespace detail {

// Component order of `p` that best matches `ref` in squared log-alpha distance.
inline std::vector<std::size_t> best_alignment(const Proposal& p, const Proposal& ref) {
    const std::size_t kappa = p.kappa;
    std::vector<std::size_t> perm(kappa);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    if (kappa == 1) return perm;
    auto cost = [&](std::size_t slot, std::size_t comp) {
        double acc = 0.0;
        for (std::size_t k = 0; k < p.dim; ++k) {
            const double d = p.log_alpha[comp * p.dim + k] - ref.log_alpha[slot * p.dim + k];
            acc += d * d;
        }
        return acc;
    };
    if (kappa <= 6) {
        std::vector<std::size_t> best = perm;
        double best_cost = std::numeric_limits<double>::infinity();
        do {
            double c = 0.0;
            for (std::size_t s = 0; s < kappa; ++s) c += cost(s, perm[s]);
            if (c < best_cost) {
                best_cost = c;
                best = perm;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best;
    }
    // greedy assignment for larger mixtures
    std::vector<char> used(kappa, 0);
    for (std::size_t s = 0; s < kappa; ++s) {
        std::size_t pick = 0;
        double pick_cost = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < kappa; ++c) {
            if (used[c]) continue;
            const double v = cost(s, c);
            if (v < pick_cost) {
                pick_cost = v;
                pick = c;
            }
        }
        used[pick] = 1;
        perm[s] = pick;
    }
    return perm;
}

}  // namespace detail

struct MixtureFit {
    DirichletMixture mixture;
    ChainDiagnostics diagnostics;
};

/// Runs S independence-sampler steps starting from `init` and returns the
/// average of exp(log-alpha) and of the weights over steps ceil(S/2)..S,
/// counting held states with multiplicity. If no proposal was ever accepted
/// the initial mixture is returned and `never_moved` is set.
template <typename Rng>
MixtureFit fit_mixture(const SelectedSet& obs, const DirichletMixture& init, const McmcConfig& cfg, Rng& rng) {
    cfg.validate();
    if (obs.empty()) throw std::invalid_argument("fit_mixture: empty observation set");
    if (init.kappa() != cfg.kappa) throw std::invalid_argument("fit_mixture: init mixture has the wrong kappa");
    const MixturePosterior post(obs.rows, cfg.mu, cfg.sigma);
    if (init.dim() != post.dim()) throw std::invalid_argument("fit_mixture: dimension mismatch");

    const std::size_t S = cfg.steps;
    const std::size_t window_start = (S + 1) / 2;
    const std::size_t kappa = init.kappa();
    const std::size_t dim = init.dim();

    ChainState state = make_chain_state(Proposal::from_mixture(init), post);
    std::vector<double> alpha_sum(kappa * dim, 0.0);
    std::vector<double> weight_sum(kappa, 0.0);
    std::size_t window = 0;
    double first_half = 0.0;
    double second_half = 0.0;
    std::optional<Proposal> reference;
    std::vector<std::size_t> perm(kappa);
    std::size_t perm_for_move = std::numeric_limits<std::size_t>::max();

    for (std::size_t i = 1; i <= S; ++i) {
        state = mh_step(state, post, cfg, rng);
        (i <= S / 2 ? first_half : second_half) += state.log_posterior;
        if (i < window_start) continue;
        if (!reference) reference = state.accepted;
        if (perm_for_move != state.accepted_moves) {
            if (cfg.align_labels)
                perm = detail::best_alignment(state.accepted, *reference);
            else
                std::iota(perm.begin(), perm.end(), std::size_t{0});
            perm_for_move = state.accepted_moves;
        }
        for (std::size_t s = 0; s < kappa; ++s) {
            const std::size_t c = perm[s];
            for (std::size_t k = 0; k < dim; ++k)
                alpha_sum[s * dim + k] += std::exp(state.accepted.log_alpha[c * dim + k]);
            weight_sum[s] += state.accepted.weights[c];
        }
        ++window;
    }

    ChainDiagnostics diag;
    diag.steps = S;
    diag.accepted = state.accepted_moves;
    diag.acceptance_rate = static_cast<double>(state.accepted_moves) / static_cast<double>(S);
    diag.window_size = window;
    diag.first_half_mean_log_posterior = first_half / static_cast<double>(S / 2);
    diag.second_half_mean_log_posterior = second_half / static_cast<double>(S - S / 2);
    if (state.accepted_moves == 0) {
        diag.never_moved = true;
        return {init, diag};
    }

    std::vector<DirichletParams> comps;
    comps.reserve(kappa);
    for (std::size_t s = 0; s < kappa; ++s) {
        std::vector<double> a(dim);
        for (std::size_t k = 0; k < dim; ++k) a[k] = alpha_sum[s * dim + k] / static_cast<double>(window);
        comps.emplace_back(std::move(a));
    }
    std::vector<double> w(kappa);
    double wsum = 0.0;
    for (std::size_t s = 0; s < kappa; ++s) wsum += weight_sum[s];
    for (std::size_t s = 0; s < kappa; ++s) w[s] = weight_sum[s] / wsum;
    return {DirichletMixture(std::move(comps), std::move(w)), diag};
}

}  // namespace ddps
