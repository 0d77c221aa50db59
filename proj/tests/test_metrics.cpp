#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ddps/metrics.hpp"
#include "ddps/problems.hpp"

using namespace ddps;

namespace {

// Inclusion-exclusion over all subsets: the union of boxes [p, ref].
double hv_inclusion_exclusion(const std::vector<Row>& pts, const std::vector<double>& ref) {
    std::vector<Row> in;
    for (const auto& p : pts) {
        bool ok = true;
        for (std::size_t k = 0; k < ref.size(); ++k) ok = ok && p[k] < ref[k];
        if (ok) in.push_back(p);
    }
    const std::size_t n = in.size();
    double total = 0.0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        std::vector<double> corner(ref.size(), -1e300);
        int bits = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(mask >> i & 1)) continue;
            ++bits;
            for (std::size_t k = 0; k < ref.size(); ++k) corner[k] = std::max(corner[k], in[i][k]);
        }
        double vol = 1.0;
        for (std::size_t k = 0; k < ref.size(); ++k) vol *= ref[k] - corner[k];
        total += (bits % 2 ? 1.0 : -1.0) * vol;
    }
    return total;
}

double hv_monte_carlo(const std::vector<Row>& pts, const std::vector<double>& ref, std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int hit = 0;
    for (int s = 0; s < n; ++s) {
        std::vector<double> z(ref.size());
        for (std::size_t k = 0; k < ref.size(); ++k) z[k] = u(rng) * ref[k];
        for (const auto& p : pts) {
            bool dom = true;
            for (std::size_t k = 0; k < ref.size(); ++k) dom = dom && p[k] <= z[k];
            if (dom) {
                ++hit;
                break;
            }
        }
    }
    double box = 1.0;
    for (double r : ref) box *= r;
    return box * hit / n;
}

std::vector<Row> random_set(std::mt19937_64& rng, std::size_t n, std::size_t m, double hi) {
    std::uniform_real_distribution<double> u(0.0, hi);
    std::vector<Row> pts(n, Row(m));
    for (auto& p : pts)
        for (double& v : p) v = u(rng);
    return pts;
}

}  // namespace

TEST(Hypervolume, WorkedValues) {
    EXPECT_DOUBLE_EQ(hypervolume({{0.0, 0.0}}, {2.0, 2.0}), 4.0);
    EXPECT_DOUBLE_EQ(hypervolume({{0.0, 1.0}, {1.0, 0.0}}, {2.0, 2.0}), 3.0);
    EXPECT_DOUBLE_EQ(hypervolume({{3.0, 0.0}}, {2.0, 2.0}), 0.0);
    EXPECT_DOUBLE_EQ(hypervolume({{2.0, 0.0}}, {2.0, 2.0}), 0.0);  // on the boundary
    EXPECT_DOUBLE_EQ(hypervolume({{0.0, 0.0, 0.0}}, {1.0, 1.0, 1.0}), 1.0);
    EXPECT_DOUBLE_EQ(hypervolume({{0.5, 0.0, 0.0}, {0.0, 0.5, 0.0}}, {1.0, 1.0, 1.0}), 0.75);
    EXPECT_DOUBLE_EQ(hypervolume({}, {1.0, 1.0}), 0.0);
}

TEST(Hypervolume, Errors) {
    EXPECT_THROW(hypervolume({{0.0}}, {1.0}), std::invalid_argument);
    EXPECT_THROW(hypervolume({{0.0, 0.0, 0.0, 0.0}}, {1.0, 1.0, 1.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(hypervolume({{0.0, 0.0, 0.0}}, {1.0, 1.0}), std::invalid_argument);
}

TEST(Hypervolume, MatchesInclusionExclusion) {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<std::size_t> un(1, 10);
    for (int t = 0; t < 300; ++t) {
        const std::size_t m = t % 2 ? 3 : 2;
        const auto pts = random_set(rng, un(rng), m, 1.2);
        const std::vector<double> ref(m, 1.0);
        EXPECT_NEAR(hypervolume(pts, ref), hv_inclusion_exclusion(pts, ref), 1e-12) << "instance " << t;
    }
}

TEST(Hypervolume, MatchesMonteCarlo) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 10; ++t) {
        const std::size_t m = t % 2 ? 3 : 2;
        const auto pts = random_set(rng, 40, m, 1.0);
        const std::vector<double> ref(m, 1.1);
        const double exact = hypervolume(pts, ref);
        const int n = 200000;
        const double mc = hv_monte_carlo(pts, ref, rng, n);
        double box = 1.0;
        for (double r : ref) box *= r;
        const double p = exact / box;
        const double se = box * std::sqrt(p * (1.0 - p) / n);
        EXPECT_LE(std::abs(mc - exact), 4.0 * se + 1e-12) << "instance " << t;
    }
}

TEST(Hypervolume, MonotoneAndPermutationInvariant) {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 200; ++t) {
        const std::size_t m = t % 2 ? 3 : 2;
        auto pts = random_set(rng, 30, m, 1.0);
        const std::vector<double> ref(m, 1.0);
        const double base = hypervolume(pts, ref);
        std::shuffle(pts.begin(), pts.end(), rng);
        EXPECT_NEAR(hypervolume(pts, ref), base, 1e-12);
        auto more = pts;
        more.push_back(random_set(rng, 1, m, 1.0).front());
        EXPECT_GE(hypervolume(more, ref), base - 1e-12);
        auto dominated = pts;
        Row worse = pts.front();
        for (double& v : worse) v = std::min(1.0, v + 0.01);
        dominated.push_back(worse);
        EXPECT_NEAR(hypervolume(dominated, ref), base, 1e-12);
    }
}

TEST(Igd, WorkedValues) {
    EXPECT_NEAR(igd({{0.0, 0.0}}, {{0.5, 0.5}}), std::sqrt(0.5), 1e-15);
    EXPECT_DOUBLE_EQ(igd({{0.0, 1.0}, {1.0, 0.0}}, {{0.0, 1.0}, {1.0, 0.0}}), 0.0);
    EXPECT_DOUBLE_EQ(igd({{0.0, 1.0}}, {{0.0, 1.0}, {1.0, 0.0}}), std::sqrt(2.0) / 2.0);
}

TEST(Igd, ZeroIffReferenceCovered) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 100; ++t) {
        const auto ref = random_set(rng, 20, 3, 1.0);
        auto approx = ref;
        approx.push_back({5.0, 5.0, 5.0});  // extra points never increase IGD
        EXPECT_EQ(igd(approx, ref), 0.0);
        approx.erase(approx.begin());
        EXPECT_GT(igd(approx, ref), 0.0);
    }
}

TEST(Igd, Errors) {
    EXPECT_THROW(igd({}, {{0.0, 0.0}}), std::invalid_argument);
    EXPECT_THROW(igd({{0.0, 0.0}}, {}), std::invalid_argument);
    EXPECT_THROW(igd({{0.0, 0.0, 0.0}}, {{0.0, 0.0}}), std::invalid_argument);
}

// A far away dominated point adds nothing to HV and does not change IGD.
TEST(Metrics, FarDominatedPointIsInert) {
    const auto spec = ProblemSpec::standard(ProblemName::DTLZ5);
    const auto front = true_front(spec, 500);
    std::vector<Row> approx(front.begin(), front.begin() + 50);
    const double hv = hypervolume(approx, spec.hv_reference());
    const double g = igd(approx, front);
    approx.push_back({50.0, 50.0, 50.0});
    EXPECT_EQ(hypervolume(approx, spec.hv_reference()), hv);
    EXPECT_EQ(igd(approx, front), g);
}

TEST(Metrics, TrueFrontScoresBest) {
    for (auto name : {ProblemName::ZDT3, ProblemName::DTLZ7}) {
        const auto spec = ProblemSpec::standard(name);
        const auto front = true_front(spec, spec.m == 2 ? 1000 : 2000);
        EXPECT_EQ(igd(front, front), 0.0);
        EXPECT_GT(hypervolume(front, spec.hv_reference()), 0.0);
    }
}
