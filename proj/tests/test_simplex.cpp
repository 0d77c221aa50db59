#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "ddps/simplex.hpp"

using namespace ddps;

namespace {

// Independent density: direct Gamma-function formula, no log-space tricks.
double dirichlet_pdf_direct(const std::vector<double>& x, const std::vector<double>& a) {
    double total = 0.0;
    double denom = 1.0;
    double prod = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        total += a[i];
        denom *= std::tgamma(a[i]);
        prod *= std::pow(x[i], a[i] - 1.0);
    }
    return std::tgamma(total) / denom * prod;
}

struct SampleStats {
    std::vector<double> mean;
    std::vector<double> var;
    std::vector<double> mean_se;
    std::vector<double> var_se;
};

SampleStats sample_stats(const std::vector<std::vector<double>>& xs) {
    const std::size_t m = xs.front().size();
    const double n = static_cast<double>(xs.size());
    SampleStats s;
    s.mean.assign(m, 0.0);
    for (const auto& x : xs)
        for (std::size_t k = 0; k < m; ++k) s.mean[k] += x[k] / n;
    std::vector<double> m2(m, 0.0);
    std::vector<double> m4(m, 0.0);
    for (const auto& x : xs)
        for (std::size_t k = 0; k < m; ++k) {
            const double d = x[k] - s.mean[k];
            m2[k] += d * d / n;
            m4[k] += d * d * d * d / n;
        }
    for (std::size_t k = 0; k < m; ++k) {
        s.var.push_back(m2[k] * n / (n - 1.0));
        s.mean_se.push_back(std::sqrt(m2[k] / n));
        s.var_se.push_back(std::sqrt((m4[k] - m2[k] * m2[k]) / n));
    }
    return s;
}

}  // namespace

TEST(PreferenceVector, NormalizesAndClamps) {
    PreferenceVector r({2.0, 6.0});
    EXPECT_NEAR(r[0], 0.25, 1e-15);
    EXPECT_NEAR(r[1], 0.75, 1e-15);

    PreferenceVector edge({0.0, 1.0});
    EXPECT_GT(edge[0], 0.0);
    EXPECT_NEAR(edge[0], kBoundaryClamp, 1e-12);
    EXPECT_NEAR(edge[0] + edge[1], 1.0, kSimplexTolerance);
}

TEST(PreferenceVector, RejectsInvalidInput) {
    EXPECT_THROW(PreferenceVector({1.0}), std::invalid_argument);
    EXPECT_THROW(PreferenceVector({-1.0, 2.0}), std::invalid_argument);
    EXPECT_THROW(PreferenceVector({0.0, 0.0}), std::invalid_argument);
    EXPECT_THROW(PreferenceVector({NAN, 1.0}), std::invalid_argument);
}

TEST(DirichletParams, RejectsNonPositive) {
    EXPECT_THROW(DirichletParams({1.0, 0.0}), std::invalid_argument);
    EXPECT_THROW(DirichletParams({1.0, -2.0}), std::invalid_argument);
    EXPECT_THROW(DirichletParams({INFINITY, 1.0}), std::invalid_argument);
}

TEST(DirichletMixture, ValidatesWeights) {
    const DirichletParams a({1.0, 1.0});
    EXPECT_THROW(DirichletMixture({a, a}, {0.5, 0.6}), std::invalid_argument);
    EXPECT_THROW(DirichletMixture({a, a}, {1.5, -0.5}), std::invalid_argument);
    EXPECT_THROW(DirichletMixture({a}, {0.5, 0.5}), std::invalid_argument);
    EXPECT_THROW(DirichletMixture({a, DirichletParams({1.0, 1.0, 1.0})}, {0.5, 0.5}), std::invalid_argument);
    const auto u = DirichletMixture::uniform(3, 4);
    EXPECT_EQ(u.kappa(), 4u);
    EXPECT_NEAR(std::accumulate(u.weights().begin(), u.weights().end(), 0.0), 1.0, 1e-12);
}

TEST(DirichletLogPdf, WorkedValues) {
    const std::vector<double> half{0.5, 0.5};
    EXPECT_NEAR(dirichlet_log_pdf(half, DirichletParams({1.0, 1.0})), 0.0, 1e-12);
    EXPECT_NEAR(std::exp(dirichlet_log_pdf(half, DirichletParams({2.0, 2.0}))), 1.5, 1e-12);
    const std::vector<double> x3{0.2, 0.3, 0.5};
    EXPECT_NEAR(std::exp(dirichlet_log_pdf(x3, DirichletParams({1.0, 1.0, 1.0}))), 2.0, 1e-12);
}

TEST(DirichletLogPdf, MatchesDirectFormula) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ua(0.3, 8.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 2 + trial % 2;
        std::vector<double> a(m);
        for (double& v : a) v = ua(rng);
        std::vector<double> ones(m, 1.0);
        const auto x = sample_simplex(ones, rng);
        if (*std::min_element(x.begin(), x.end()) < 1e-3) continue;
        const double expected = std::log(dirichlet_pdf_direct(x, a));
        EXPECT_NEAR(dirichlet_log_pdf(x, DirichletParams(a)), expected, 1e-9 * std::max(1.0, std::abs(expected)));
    }
}

TEST(DirichletLogPdf, Errors) {
    const std::vector<double> x3{0.2, 0.3, 0.5};
    EXPECT_THROW(dirichlet_log_pdf(x3, DirichletParams({1.0, 1.0})), std::invalid_argument);
    const std::vector<double> corner{0.0, 1.0};
    EXPECT_THROW(dirichlet_log_pdf(corner, DirichletParams({2.0, 2.0})), std::domain_error);
    const std::vector<double> one{1.0, 0.0};
    EXPECT_THROW(dirichlet_log_pdf(one, DirichletParams({2.0, 2.0})), std::domain_error);
}

TEST(MixtureLogPdf, WorkedValues) {
    const std::vector<double> half{0.5, 0.5};
    const DirichletParams a1({1.0, 1.0});
    const DirichletParams a2({2.0, 2.0});
    EXPECT_NEAR(std::exp(mixture_log_pdf(half, DirichletMixture({a1, a2}, {0.5, 0.5}))), 1.25, 1e-12);

    const std::vector<double> x{0.3, 0.7};
    const DirichletParams c({3.0, 1.5});
    EXPECT_DOUBLE_EQ(mixture_log_pdf(x, DirichletMixture({c}, {1.0})), dirichlet_log_pdf(x, c));
    EXPECT_EQ(mixture_log_pdf(x, DirichletMixture({c, a2}, {1.0, 0.0})), dirichlet_log_pdf(x, c));
}

TEST(MixtureLogPdf, StableForExtremeInputs) {
    const DirichletMixture mix({DirichletParams({1000.0, 1.0, 1000.0}), DirichletParams({0.5, 1000.0, 2.0})},
                               {0.3, 0.7});
    for (const auto& x : std::vector<std::vector<double>>{
             {1e-6, 1e-6, 1.0 - 2e-6}, {1.0 - 2e-6, 1e-6, 1e-6}, {0.5 - 5e-7, 1e-6, 0.5 - 5e-7}}) {
        EXPECT_TRUE(std::isfinite(mixture_log_pdf(x, mix)));
    }
}

TEST(MixtureLogPdf, IdenticalComponentsCollapse) {
    std::mt19937_64 rng(5);
    const DirichletParams c({2.5, 0.7, 4.0});
    const DirichletMixture mix({c, c, c, c}, {0.1, 0.2, 0.3, 0.4});
    const std::vector<double> ones(3, 1.0);
    for (int i = 0; i < 100; ++i) {
        auto x = sample_simplex(ones, rng);
        detail::clamp_to_simplex(x);
        EXPECT_NEAR(mixture_log_pdf(x, mix), dirichlet_log_pdf(x, c), 1e-12);
    }
}

// Uniform importance sampling: E_U[p(x)] times the simplex volume 1/(m-1)!.
TEST(MixtureLogPdf, MonteCarloNormalization) {
    std::mt19937_64 rng(2024);
    const DirichletMixture mix3({DirichletParams({2.0, 3.0, 1.5}), DirichletParams({1.2, 1.0, 4.0})}, {0.6, 0.4});
    const DirichletMixture mix2({DirichletParams({3.0, 2.0}), DirichletParams({1.5, 6.0})}, {0.25, 0.75});
    for (const auto* mix : {&mix2, &mix3}) {
        const std::size_t m = mix->dim();
        const std::vector<double> ones(m, 1.0);
        const double volume = 1.0 / std::tgamma(static_cast<double>(m));
        double acc = 0.0;
        const int n = 1000000;
        for (int i = 0; i < n; ++i) {
            auto x = sample_simplex(ones, rng);
            detail::clamp_to_simplex(x);
            acc += std::exp(mixture_log_pdf(x, *mix));
        }
        EXPECT_NEAR(acc / n * volume, 1.0, 0.02) << "m=" << m;
    }
}

TEST(SampleDirichlet, OnSimplexAndSeeded) {
    std::mt19937_64 a(99);
    std::mt19937_64 b(99);
    const DirichletParams p({0.3, 2.0, 7.0});
    for (int i = 0; i < 1000; ++i) {
        const auto x = sample_dirichlet(p, a);
        const auto y = sample_dirichlet(p, b);
        EXPECT_EQ(x, y);
        double s = 0.0;
        for (double v : x.values()) {
            EXPECT_GT(v, 0.0);
            s += v;
        }
        EXPECT_NEAR(s, 1.0, 1e-9);
    }
}

TEST(SampleDirichlet, WorkedMoments) {
    std::mt19937_64 rng(7);
    const DirichletParams p({2.0, 3.0, 5.0});
    std::vector<std::vector<double>> xs;
    for (int i = 0; i < 100000; ++i) {
        const auto x = sample_dirichlet(p, rng);
        xs.emplace_back(x.values().begin(), x.values().end());
    }
    const auto s = sample_stats(xs);
    EXPECT_NEAR(s.mean[0], 0.2, 0.01);
    EXPECT_NEAR(s.mean[1], 0.3, 0.01);
    EXPECT_NEAR(s.mean[2], 0.5, 0.01);
    EXPECT_NEAR(s.var[0], 0.014545, 0.002);
}

// 20 random parameter sets. About 100 comparisons, so a 4 standard error band
// keeps the family-wise false alarm rate near 0.6%.
TEST(SampleDirichlet, AgreesWithMomentFormula) {
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> ua(0.2, 20.0);
    for (int set = 0; set < 20; ++set) {
        const std::size_t m = set % 2 ? 3 : 2;
        std::vector<double> a(m);
        for (double& v : a) v = ua(rng);
        const DirichletParams p(a);
        std::vector<std::vector<double>> xs;
        xs.reserve(100000);
        for (int i = 0; i < 100000; ++i) xs.push_back(sample_simplex(p.alpha(), rng));
        const auto s = sample_stats(xs);
        const auto mom = dirichlet_moments(p);
        for (std::size_t k = 0; k < m; ++k) {
            EXPECT_LE(std::abs(s.mean[k] - mom.mean[k]), 4.0 * s.mean_se[k]) << "set " << set << " k " << k;
            EXPECT_LE(std::abs(s.var[k] - mom.variance[k]), 4.0 * s.var_se[k]) << "set " << set << " k " << k;
        }
    }
}

TEST(SampleMixture, ComponentFrequencies) {
    std::mt19937_64 rng(3);
    // Components concentrated at opposite ends so the source is identifiable.
    const DirichletMixture mix({DirichletParams({500.0, 1.0}), DirichletParams({1.0, 500.0})}, {0.7, 0.3});
    const auto xs = sample_mixture(mix, 100000, rng);
    ASSERT_EQ(xs.size(), 100000u);
    std::size_t first = 0;
    for (const auto& x : xs) first += x[0] > 0.5;
    EXPECT_NEAR(static_cast<double>(first) / 100000.0, 0.7, 0.01);
}

TEST(SampleMixture, EmptyAndSingleComponent) {
    std::mt19937_64 rng(3);
    const DirichletParams c({2.0, 5.0});
    EXPECT_TRUE(sample_mixture(DirichletMixture({c}, {1.0}), 0, rng).empty());

    std::mt19937_64 r1(8);
    const auto xs = sample_mixture(DirichletMixture({c}, {1.0}), 50000, r1);
    double mean = 0.0;
    for (const auto& x : xs) mean += x[0] / 50000.0;
    EXPECT_NEAR(mean, 2.0 / 7.0, 0.005);
}

TEST(DirichletMoments, WorkedValues) {
    const auto mom = dirichlet_moments(DirichletParams({2.0, 3.0, 5.0}));
    EXPECT_NEAR(mom.mean[0], 0.2, 1e-15);
    EXPECT_NEAR(mom.mean[1], 0.3, 1e-15);
    EXPECT_NEAR(mom.mean[2], 0.5, 1e-15);
    EXPECT_NEAR(mom.variance[0], 16.0 / 1100.0, 1e-15);

    for (std::size_t m : {2u, 3u, 5u}) {
        for (double eps : {0.5, 3.0, 12.0}) {
            const DirichletParams p(std::vector<double>(m, eps / static_cast<double>(m)));
            const auto sym = dirichlet_moments(p);
            const double md = static_cast<double>(m);
            for (std::size_t k = 0; k < m; ++k) {
                EXPECT_NEAR(sym.mean[k], 1.0 / md, 1e-15);
                EXPECT_NEAR(sym.variance[k], (md - 1.0) / (md * md * (eps + 1.0)), 1e-15);
            }
        }
    }
}
