#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ddps {

/// Random stream used by every sampler in the library. Callers own it, so
/// parallel tasks simply hold independent streams.
using RandomStream = std::mt19937_64;

inline constexpr double kSimplexTolerance = 1e-9;
inline constexpr double kBoundaryClamp = 1e-6;

namespace detail {

inline double log_sum_exp(std::span<const double> terms) {
    double top = -std::numeric_limits<double>::infinity();
    for (double t : terms) top = std::max(top, t);
    if (!std::isfinite(top)) return top;
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - top);
    return top + std::log(acc);
}

// Clamp into [eps, 1 - eps], then rescale so the entries sum to one.
inline void clamp_to_simplex(std::vector<double>& v) {
    for (double& x : v) x = std::clamp(x, kBoundaryClamp, 1.0 - kBoundaryClamp);
    const double total = std::accumulate(v.begin(), v.end(), 0.0);
    for (double& x : v) x /= total;
}

}  // namespace detail

/// A point on the open (m-1)-simplex used to weight m objectives.
class PreferenceVector {
  public:
    PreferenceVector() = default;

    /// Normalizes `values` onto the simplex and clamps away from the boundary.
    /// Throws if fewer than two entries, any entry is negative/non-finite, or
    /// the sum is zero.
    explicit PreferenceVector(std::vector<double> values) : values_(std::move(values)) {
        if (values_.size() < 2) throw std::invalid_argument("PreferenceVector needs at least two entries");
        double total = 0.0;
        for (double x : values_) {
            if (!std::isfinite(x) || x < 0.0)
                throw std::invalid_argument("PreferenceVector entries must be finite and nonnegative");
            total += x;
        }
        if (total <= 0.0) throw std::invalid_argument("PreferenceVector entries sum to zero");
        for (double& x : values_) x /= total;
        detail::clamp_to_simplex(values_);
    }

    [[nodiscard]] std::size_t size() const { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
    [[nodiscard]] std::span<const double> values() const { return values_; }
    operator std::span<const double>() const { return values_; }  // NOLINT

    friend bool operator==(const PreferenceVector&, const PreferenceVector&) = default;

  private:
    std::vector<double> values_;
};

/// Concentration vector of a single Dirichlet component.
class DirichletParams {
  public:
    DirichletParams() = default;

    explicit DirichletParams(std::vector<double> alpha) : alpha_(std::move(alpha)) {
        if (alpha_.empty()) throw std::invalid_argument("DirichletParams needs at least one entry");
        for (double a : alpha_)
            if (!(a > 0.0) || !std::isfinite(a))
                throw std::invalid_argument("Dirichlet concentration must be finite and positive");
    }

    [[nodiscard]] std::size_t size() const { return alpha_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return alpha_[i]; }
    [[nodiscard]] std::span<const double> alpha() const { return alpha_; }
    [[nodiscard]] double total() const { return std::accumulate(alpha_.begin(), alpha_.end(), 0.0); }

    /// log(1 / B(alpha)), the normalizing constant of the density.
    [[nodiscard]] double log_norm() const {
        double acc = std::lgamma(total());
        for (double a : alpha_) acc -= std::lgamma(a);
        return acc;
    }

    friend bool operator==(const DirichletParams&, const DirichletParams&) = default;

  private:
    std::vector<double> alpha_;
};

/// Weighted mixture of Dirichlet components, each with its own concentration.
class DirichletMixture {
  public:
    DirichletMixture() = default;

    DirichletMixture(std::vector<DirichletParams> components, std::vector<double> weights)
        : components_(std::move(components)), weights_(std::move(weights)) {
        if (components_.empty()) throw std::invalid_argument("mixture needs at least one component");
        if (weights_.size() != components_.size())
            throw std::invalid_argument("mixture weights and components differ in count");
        const std::size_t m = components_.front().size();
        for (const auto& c : components_)
            if (c.size() != m) throw std::invalid_argument("mixture components differ in dimension");
        double total = 0.0;
        for (double w : weights_) {
            if (!(w >= 0.0) || !std::isfinite(w))
                throw std::invalid_argument("mixture weights must be finite and nonnegative");
            total += w;
        }
        if (std::abs(total - 1.0) > 1e-6 || total <= 0.0)
            throw std::invalid_argument("mixture weights must sum to one");
        for (double& w : weights_) w /= total;
    }

    /// kappa copies of Dir(1, ..., 1) with equal weights.
    static DirichletMixture uniform(std::size_t m, std::size_t kappa) {
        std::vector<DirichletParams> comps(kappa, DirichletParams(std::vector<double>(m, 1.0)));
        return {std::move(comps), std::vector<double>(kappa, 1.0 / static_cast<double>(kappa))};
    }

    [[nodiscard]] std::size_t kappa() const { return components_.size(); }
    [[nodiscard]] std::size_t dim() const { return components_.front().size(); }
    [[nodiscard]] const std::vector<DirichletParams>& components() const { return components_; }
    [[nodiscard]] const std::vector<double>& weights() const { return weights_; }

    friend bool operator==(const DirichletMixture&, const DirichletMixture&) = default;

  private:
    std::vector<DirichletParams> components_;
    std::vector<double> weights_;
};

/// Log density of Dir(alpha) at an interior simplex point.
inline double dirichlet_log_pdf(std::span<const double> x, const DirichletParams& p) {
    if (x.size() != p.size())
        throw std::invalid_argument("dirichlet_log_pdf: dimension mismatch (" + std::to_string(x.size()) +
                                    " vs " + std::to_string(p.size()) + ")");
    double acc = p.log_norm();
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0 && x[i] < 1.0))
            throw std::domain_error("dirichlet_log_pdf: point lies on the simplex boundary; clamp first");
        acc += (p[i] - 1.0) * std::log(x[i]);
    }
    return acc;
}

/// Log density of a Dirichlet mixture, combined with a max-shifted log-sum-exp.
/// Zero-weight components are skipped.
inline double mixture_log_pdf(std::span<const double> x, const DirichletMixture& mix) {
    std::vector<double> terms;
    terms.reserve(mix.kappa());
    for (std::size_t i = 0; i < mix.kappa(); ++i) {
        const double w = mix.weights()[i];
        const double lp = dirichlet_log_pdf(x, mix.components()[i]);
        if (w > 0.0) terms.push_back(std::log(w) + lp);
    }
    return detail::log_sum_exp(terms);
}

/// Raw Gamma-normalization draw from Dir(alpha). Unlike sample_dirichlet this
/// accepts a single-entry alpha and applies no boundary clamp.
template <typename Rng>
std::vector<double> sample_simplex(std::span<const double> alpha, Rng& rng) {
    std::vector<double> out(alpha.size());
    for (;;) {
        double total = 0.0;
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            std::gamma_distribution<double> gamma(alpha[i], 1.0);
            out[i] = gamma(rng);
            total += out[i];
        }
        // every gamma variate underflowed (tiny alpha); redraw
        if (total > 0.0) {
            for (double& x : out) x /= total;
            return out;
        }
    }
}

template <typename Rng>
PreferenceVector sample_dirichlet(const DirichletParams& p, Rng& rng) {
    return PreferenceVector(sample_simplex(p.alpha(), rng));
}

/// Component index drawn from the mixture weights.
template <typename Rng>
std::size_t sample_component(const DirichletMixture& mix, Rng& rng) {
    std::discrete_distribution<std::size_t> pick(mix.weights().begin(), mix.weights().end());
    return pick(rng);
}

template <typename Rng>
std::vector<PreferenceVector> sample_mixture(const DirichletMixture& mix, std::size_t n, Rng& rng) {
    std::vector<PreferenceVector> out;
    out.reserve(n);
    std::discrete_distribution<std::size_t> pick(mix.weights().begin(), mix.weights().end());
    for (std::size_t i = 0; i < n; ++i) out.push_back(sample_dirichlet(mix.components()[pick(rng)], rng));
    return out;
}

struct DirichletMoments {
    std::vector<double> mean;
    std::vector<double> variance;
};

/// Closed-form mean and variance of each coordinate:
/// a_k / A and a_k (A - a_k) / (A^2 (A + 1)).
inline DirichletMoments dirichlet_moments(const DirichletParams& p) {
    const double total = p.total();
    DirichletMoments out;
    out.mean.reserve(p.size());
    out.variance.reserve(p.size());
    for (double a : p.alpha()) {
        out.mean.push_back(a / total);
        out.variance.push_back(a * (total - a) / (total * total * (total + 1.0)));
    }
    return out;
}

}  // namespace ddps
