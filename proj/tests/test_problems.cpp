#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "ddps/metrics.hpp"
#include "ddps/problems.hpp"

using namespace ddps;

namespace {

const std::vector<ProblemName> kAll = {ProblemName::ZDT3, ProblemName::LZLZK, ProblemName::DTLZ4, ProblemName::DTLZ5,
                                       ProblemName::DTLZ7};

constexpr double kPi = std::numbers::pi;

double zdt3_curve(double f1) { return 1.0 - std::sqrt(f1) - f1 * std::sin(10.0 * kPi * f1); }
double bump(double f) { return f * (1.0 + std::sin(3.0 * kPi * f)); }

}  // namespace

TEST(Problems, StandardShapes) {
    EXPECT_EQ(ProblemSpec::standard(ProblemName::ZDT3).d, 30u);
    EXPECT_EQ(ProblemSpec::standard(ProblemName::LZLZK).d, 20u);
    EXPECT_EQ(ProblemSpec::standard(ProblemName::DTLZ4).d, 7u);
    EXPECT_EQ(ProblemSpec::standard(ProblemName::DTLZ7).d, 22u);
    EXPECT_EQ(ProblemSpec::standard(ProblemName::DTLZ5).m, 3u);
    EXPECT_EQ(parse_problem("dtlz7"), ProblemName::DTLZ7);
    EXPECT_EQ(parse_problem("Zdt3"), ProblemName::ZDT3);
    EXPECT_FALSE(parse_problem("zdt4").has_value());
    EXPECT_THROW(ProblemSpec::with_dim(ProblemName::DTLZ4, 2), std::invalid_argument);
}

TEST(Problems, WorkedEvaluations) {
    const auto zdt3 = ProblemSpec::standard(ProblemName::ZDT3);
    std::vector<double> x(zdt3.d, 0.0);
    auto f = evaluate(zdt3, x);
    EXPECT_NEAR(f[0], 0.0, 1e-15);
    EXPECT_NEAR(f[1], 1.0, 1e-15);
    x[0] = 1.0;
    f = evaluate(zdt3, x);
    EXPECT_NEAR(f[0], 1.0, 1e-15);
    EXPECT_NEAR(f[1], 0.0, 1e-14);

    const auto dtlz7 = ProblemSpec::standard(ProblemName::DTLZ7);
    f = evaluate(dtlz7, std::vector<double>(dtlz7.d, 0.0));
    EXPECT_NEAR(f[0], 0.0, 1e-15);
    EXPECT_NEAR(f[1], 0.0, 1e-15);
    EXPECT_NEAR(f[2], 6.0, 1e-12);

    const auto dtlz5 = ProblemSpec::standard(ProblemName::DTLZ5);
    f = evaluate(dtlz5, std::vector<double>(dtlz5.d, 0.5));
    EXPECT_NEAR(f[0], 0.5, 1e-12);
    EXPECT_NEAR(f[1], 0.5, 1e-12);
    EXPECT_NEAR(f[2], std::sqrt(2.0) / 2.0, 1e-12);

    // x = 0.5 in the unit box is the centre of the [-1, 1] domain.
    const auto lz = ProblemSpec::standard(ProblemName::LZLZK);
    f = evaluate(lz, std::vector<double>(lz.d, 0.5));
    EXPECT_NEAR(f[0], 1.0 - std::exp(-1.0), 1e-12);
    EXPECT_NEAR(f[1], 1.0 - std::exp(-1.0), 1e-12);
}

TEST(Problems, BoxViolationRejected) {
    for (auto name : kAll) {
        const auto spec = ProblemSpec::standard(name);
        std::vector<double> x(spec.d, 0.5);
        x[1] = 1.2;
        EXPECT_THROW(evaluate(spec, x), std::domain_error);
        x[1] = -0.1;
        EXPECT_THROW(evaluate(spec, x), std::domain_error);
        EXPECT_THROW(evaluate(spec, std::vector<double>(spec.d + 1, 0.5)), std::invalid_argument);
    }
}

TEST(Problems, JacobianWorkedValues) {
    const auto zdt3 = ProblemSpec::standard(ProblemName::ZDT3);
    const auto ev = evaluate_with_gradient(zdt3, std::vector<double>(zdt3.d, 0.0));
    EXPECT_EQ(ev.jac(0, 0), 1.0);
    for (std::size_t j = 1; j < zdt3.d; ++j) EXPECT_EQ(ev.jac(0, j), 0.0);

    const auto lz = ProblemSpec::standard(ProblemName::LZLZK);
    const auto lev = evaluate_with_gradient(lz, std::vector<double>(lz.d, 0.5));
    for (std::size_t j = 0; j < lz.d; ++j) EXPECT_NEAR(lev.jac(0, j), -lev.jac(1, j), 1e-14);
}

// Central differences with h = 1e-5 at 100 interior points per problem.
TEST(Problems, JacobianMatchesFiniteDifferences) {
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> u(0.02, 0.98);
    const double h = 1e-5;
    for (auto name : kAll) {
        const auto spec = ProblemSpec::standard(name);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> x(spec.d);
            for (double& v : x) v = u(rng);
            const auto ev = evaluate_with_gradient(spec, x);
            double diff2 = 0.0;
            double norm2 = 0.0;
            for (std::size_t j = 0; j < spec.d; ++j) {
                auto xp = x;
                auto xm = x;
                xp[j] += h;
                xm[j] -= h;
                const auto fp = evaluate(spec, xp);
                const auto fm = evaluate(spec, xm);
                for (std::size_t i = 0; i < spec.m; ++i) {
                    const double fd = (fp[i] - fm[i]) / (2.0 * h);
                    diff2 += (fd - ev.jac(i, j)) * (fd - ev.jac(i, j));
                    norm2 += fd * fd;
                }
            }
            EXPECT_LT(std::sqrt(diff2 / std::max(norm2, 1e-300)), 1e-4) << to_string(name) << " trial " << trial;
        }
    }
}

TEST(TrueFront, MutuallyNonDominated) {
    for (auto name : kAll) {
        const auto spec = ProblemSpec::standard(name);
        const auto front = true_front(spec, spec.m == 2 ? 1000 : 2000);
        EXPECT_EQ(front.size(), spec.m == 2 ? 1000u : 2000u) << to_string(name);
        const auto fronts = non_dominated_sort(front);
        EXPECT_EQ(*std::max_element(fronts.begin(), fronts.end()), 0u) << to_string(name);
    }
}

TEST(TrueFront, Dtlz5OnUnitSphere) {
    for (const auto& f : true_front(ProblemSpec::standard(ProblemName::DTLZ5), 500))
        EXPECT_NEAR(std::sqrt(f[0] * f[0] + f[1] * f[1] + f[2] * f[2]), 1.0, 1e-9);
    for (const auto& f : true_front(ProblemSpec::standard(ProblemName::DTLZ4), 500))
        EXPECT_NEAR(std::sqrt(f[0] * f[0] + f[1] * f[1] + f[2] * f[2]), 1.0, 1e-9);
}

TEST(TrueFront, Zdt3HasFiveSegments) {
    auto front = true_front(ProblemSpec::standard(ProblemName::ZDT3), 1000);
    std::sort(front.begin(), front.end());
    int segments = 1;
    for (std::size_t i = 1; i < front.size(); ++i) segments += front[i][0] - front[i - 1][0] > 0.02;
    EXPECT_EQ(segments, 5);
    // Published segment bounds on f1.
    const std::vector<std::pair<double, double>> bounds = {
        {0.0, 0.0830015349}, {0.1822287280, 0.2577623634}, {0.4093136748, 0.4538821041},
        {0.6183967944, 0.6525117038}, {0.8233317983, 0.8518328654}};
    for (const auto& f : front) {
        bool inside = false;
        for (const auto& [lo, hi] : bounds) inside = inside || (f[0] >= lo - 1e-4 && f[0] <= hi + 1e-4);
        EXPECT_TRUE(inside) << f[0];
        EXPECT_NEAR(f[1], zdt3_curve(f[0]), 1e-12);
    }
}

TEST(TrueFront, Dtlz7PatchesOnSurface) {
    const auto front = true_front(ProblemSpec::standard(ProblemName::DTLZ7), 2000);
    for (const auto& f : front) EXPECT_NEAR(f[2], 6.0 - bump(f[0]) - bump(f[1]), 1e-12);
    // Four patches: each of f1, f2 sits in one of two disjoint intervals.
    int low = 0;
    int high = 0;
    for (const auto& f : front) {
        EXPECT_TRUE(f[0] < 0.26 || f[0] > 0.63) << f[0];
        (f[0] < 0.26 ? low : high) += 1;
    }
    EXPECT_GT(low, 0);
    EXPECT_GT(high, 0);
}

// Optimal decision vectors evaluate onto the analytical front manifold.
TEST(TrueFront, OptimalDecisionsLandOnManifold) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        const double a = u(rng);
        const double b = u(rng);

        const auto zdt3 = ProblemSpec::standard(ProblemName::ZDT3);
        std::vector<double> x(zdt3.d, 0.0);
        x[0] = a;
        auto f = evaluate(zdt3, x);
        EXPECT_NEAR(f[1], zdt3_curve(f[0]), 1e-6);

        const auto dtlz7 = ProblemSpec::standard(ProblemName::DTLZ7);
        x.assign(dtlz7.d, 0.0);
        x[0] = a;
        x[1] = b;
        f = evaluate(dtlz7, x);
        EXPECT_NEAR(f[2], 6.0 - bump(f[0]) - bump(f[1]), 1e-6);

        for (auto name : {ProblemName::DTLZ4, ProblemName::DTLZ5}) {
            const auto spec = ProblemSpec::standard(name);
            x.assign(spec.d, 0.5);
            x[0] = a;
            x[1] = b;
            f = evaluate(spec, x);
            EXPECT_NEAR(std::sqrt(f[0] * f[0] + f[1] * f[1] + f[2] * f[2]), 1.0, 1e-6);
        }
        const auto spec5 = ProblemSpec::standard(ProblemName::DTLZ5);
        EXPECT_NEAR(f[0], f[1], 1e-9);  // DTLZ5 front is the f1 = f2 curve

        // LZLZK optimum: all decision entries equal, inside [-1/sqrt(d), 1/sqrt(d)].
        const auto lz = ProblemSpec::standard(ProblemName::LZLZK);
        const double s = (2.0 * a - 1.0) / std::sqrt(static_cast<double>(lz.d));
        f = evaluate(lz, std::vector<double>(lz.d, 0.5 * (s + 1.0)));
        const double tt = s * std::sqrt(static_cast<double>(lz.d));
        EXPECT_NEAR(f[0], 1.0 - std::exp(-(tt - 1.0) * (tt - 1.0)), 1e-6);
        EXPECT_NEAR(f[1], 1.0 - std::exp(-(tt + 1.0) * (tt + 1.0)), 1e-6);
        (void)spec5;
    }
}

TEST(TrueFront, HvReferenceDominatesFront) {
    for (auto name : kAll) {
        const auto spec = ProblemSpec::standard(name);
        const auto ref = spec.hv_reference();
        ASSERT_EQ(ref.size(), spec.m);
        for (const auto& f : true_front(spec, 500))
            for (std::size_t k = 0; k < spec.m; ++k) EXPECT_LT(f[k], ref[k]) << to_string(name);
    }
}

TEST(TrueFront, IdealPoint) {
    const auto z = ideal_point(ProblemSpec::standard(ProblemName::ZDT3));
    EXPECT_NEAR(z[0], 0.0, 1e-12);
    EXPECT_NEAR(z[1], -0.7734, 1e-3);
    const auto z5 = ideal_point(ProblemSpec::standard(ProblemName::DTLZ5));
    for (double v : z5) EXPECT_NEAR(v, 0.0, 1e-9);
}
