// Acceptance checks. Each criterion prints one PASS/FAIL line; the exit code
// is nonzero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "ddps/metrics.hpp"
#include "ddps/runner.hpp"

namespace fs = std::filesystem;
using namespace ddps;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double x, int digits = 4) {
    std::ostringstream os;
    os.precision(digits);
    os << x;
    return os.str();
}

std::vector<Row> random_rows(std::mt19937_64& rng, std::size_t n, std::size_t m, bool integer_grid) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> g(0, 5);
    std::vector<Row> pts(n, Row(m));
    for (auto& p : pts)
        for (double& v : p) v = integer_grid ? g(rng) : u(rng);
    return pts;
}

// ---------------------------------------------------------------- 1

struct Moments {
    std::vector<double> mean, var, mean_se, var_se;
};

Moments sample_moments(const std::vector<std::vector<double>>& xs) {
    const std::size_t m = xs.front().size();
    const double n = static_cast<double>(xs.size());
    Moments s{std::vector<double>(m), std::vector<double>(m), std::vector<double>(m), std::vector<double>(m)};
    for (std::size_t k = 0; k < m; ++k) {
        double mu = 0.0;
        for (const auto& x : xs) mu += x[k];
        mu /= n;
        double m2 = 0.0;
        double m4 = 0.0;
        for (const auto& x : xs) {
            const double d = x[k] - mu;
            m2 += d * d;
            m4 += d * d * d * d;
        }
        m2 /= n;
        m4 /= n;
        s.mean[k] = mu;
        s.var[k] = m2 * n / (n - 1.0);
        s.mean_se[k] = std::sqrt(m2 / n);
        s.var_se[k] = std::sqrt(std::max(m4 - m2 * m2, 0.0) / n);
    }
    return s;
}

Verdict criterion1() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> ua(0.2, 20.0);
    int outside = 0;
    int compared = 0;
    double worst = 0.0;
    for (int set = 0; set < 20; ++set) {
        const std::size_t m = 2 + set % 2;
        std::vector<double> a(m);
        for (double& v : a) v = ua(rng);
        const DirichletParams p(a);
        std::vector<std::vector<double>> xs;
        xs.reserve(100000);
        for (int i = 0; i < 100000; ++i) xs.push_back(sample_simplex(p.alpha(), rng));
        const auto s = sample_moments(xs);
        const auto mom = dirichlet_moments(p);
        for (std::size_t k = 0; k < m; ++k) {
            const double zm = std::abs(s.mean[k] - mom.mean[k]) / s.mean_se[k];
            const double zv = std::abs(s.var[k] - mom.variance[k]) / s.var_se[k];
            worst = std::max({worst, zm, zv});
            outside += (zm > 3.0) + (zv > 3.0);
            compared += 2;
        }
    }

    // Monte-Carlo normalization: E_{U ~ Dir(1)}[pdf(U)] / (m - 1)! over 10^6 uniform draws.
    const DirichletMixture mix({DirichletParams({2.0, 5.0, 3.0}), DirichletParams({6.0, 1.5, 2.5}),
                                DirichletParams({1.2, 1.4, 1.1})},
                               {0.5, 0.3, 0.2});
    const std::vector<double> ones(3, 1.0);
    double acc = 0.0;
    const int n_mc = 1000000;
    for (int i = 0; i < n_mc; ++i) {
        const auto u = sample_simplex(ones, rng);
        acc += std::exp(mixture_log_pdf(u, mix));
    }
    const double integral = acc / n_mc / 2.0;

    const double secs = seconds_since(t0);
    Verdict v;
    v.pass = outside == 0 && std::abs(integral - 1.0) <= 0.02 && secs < 30.0;
    v.detail = std::to_string(outside) + "/" + std::to_string(compared) + " moments beyond 3 SE (max z " + fmt(worst) +
               "), mixture integral " + fmt(integral, 5) + ", " + fmt(secs, 3) + " s";
    return v;
}

// ---------------------------------------------------------------- 2

bool brute_dominates(const Row& a, const Row& b) {
    bool strict = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] > b[k]) return false;
        strict = strict || a[k] < b[k];
    }
    return strict;
}

std::vector<std::size_t> brute_fronts(const std::vector<Row>& pts) {
    std::vector<std::size_t> front(pts.size(), 0);
    std::vector<bool> left(pts.size(), true);
    std::size_t remaining = pts.size();
    for (std::size_t level = 0; remaining > 0; ++level) {
        std::vector<std::size_t> peel;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (!left[i]) continue;
            bool dominated = false;
            for (std::size_t j = 0; j < pts.size() && !dominated; ++j)
                dominated = left[j] && brute_dominates(pts[j], pts[i]);
            if (!dominated) peel.push_back(i);
        }
        for (auto i : peel) {
            front[i] = level;
            left[i] = false;
        }
        remaining -= peel.size();
    }
    return front;
}

std::vector<double> direct_crowding(const std::vector<Row>& pts) {
    const double inf = std::numeric_limits<double>::infinity();
    const std::size_t m = pts.front().size();
    std::vector<double> out(pts.size(), 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        double lo = inf;
        double hi = -inf;
        for (const auto& p : pts) {
            lo = std::min(lo, p[k]);
            hi = std::max(hi, p[k]);
        }
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (pts[i][k] == lo || pts[i][k] == hi) {
                out[i] = inf;
                continue;
            }
            double below = -inf;
            double above = inf;
            for (const auto& q : pts) {
                if (q[k] < pts[i][k]) below = std::max(below, q[k]);
                if (q[k] > pts[i][k]) above = std::min(above, q[k]);
            }
            out[i] += (above - below) / (hi - lo);
        }
    }
    return out;
}

Verdict criterion2() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<std::size_t> un(1, 200);
    int front_mismatch = 0;
    int rank_mismatch = 0;
    int crowd_mismatch = 0;
    int crowd_checked = 0;
    for (int inst = 0; inst < 200; ++inst) {
        const std::size_t m = 2 + inst % 2;
        const auto pts = random_rows(rng, un(rng), m, inst % 3 == 0);
        if (non_dominated_sort(pts) != brute_fronts(pts)) ++front_mismatch;
        const auto ranks = dominance_rank(pts);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            std::size_t count = 0;
            for (const auto& q : pts) count += brute_dominates(q, pts[i]);
            if (ranks[i] != count) {
                ++rank_mismatch;
                break;
            }
        }
        // Crowding is defined within one front; check it on continuous points
        // where the direct definition is unambiguous.
        if (inst % 3 != 0 && pts.size() >= 3) {
            const auto got = crowding_distance(pts);
            const auto want = direct_crowding(pts);
            ++crowd_checked;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const bool ok = std::isinf(want[i]) ? std::isinf(got[i]) : std::abs(got[i] - want[i]) <= 1e-12;
                if (!ok) {
                    ++crowd_mismatch;
                    break;
                }
            }
        }
    }
    const double secs = seconds_since(t0);
    Verdict v;
    v.pass = front_mismatch == 0 && rank_mismatch == 0 && crowd_mismatch == 0 && secs < 30.0;
    v.detail = "front mismatches " + std::to_string(front_mismatch) + "/200, rank mismatches " +
               std::to_string(rank_mismatch) + "/200, crowding mismatches " + std::to_string(crowd_mismatch) + "/" +
               std::to_string(crowd_checked) + ", " + fmt(secs, 3) + " s";
    return v;
}

// ---------------------------------------------------------------- 3

Verdict criterion3() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::size_t> un(5, 30);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    int bad = 0;
    for (std::size_t m : {2u, 3u}) {
        for (int set = 0; set < 50; ++set) {
            auto pts = random_rows(rng, un(rng), m, false);
            const std::vector<double> ref(m, 1.1);
            const double exact = hypervolume(pts, ref);
            const int n = 1000000;
            int hit = 0;
            Row z(m);
            for (int s = 0; s < n; ++s) {
                for (std::size_t k = 0; k < m; ++k) z[k] = u(rng) * ref[k];
                for (const auto& p : pts) {
                    bool dom = true;
                    for (std::size_t k = 0; k < m && dom; ++k) dom = p[k] <= z[k];
                    if (dom) {
                        ++hit;
                        break;
                    }
                }
            }
            const double mc = std::pow(1.1, static_cast<double>(m)) * hit / n;
            const double rel = std::abs(exact - mc) / mc;
            worst = std::max(worst, rel);
            bad += rel > 0.01;
        }
    }
    const double w4 = hypervolume({{0.0, 0.0}}, {2.0, 2.0});
    const double w3 = hypervolume({{0.0, 1.0}, {1.0, 0.0}}, {2.0, 2.0});
    const double secs = seconds_since(t0);
    Verdict v;
    v.pass = bad == 0 && w4 == 4.0 && w3 == 3.0 && secs < 120.0;
    v.detail = std::to_string(bad) + "/100 sets beyond 1% (max rel err " + fmt(worst, 3) + "), worked values " +
               fmt(w4) + " and " + fmt(w3) + ", " + fmt(secs, 3) + " s";
    return v;
}

// ---------------------------------------------------------------- 4

std::vector<bool> relu_mask(const MlpParams& p, std::span<const double> r) {
    const auto tr = forward_trace(p, r);
    std::vector<bool> mask;
    for (std::size_t l = 0; l + 1 < tr.pre.size(); ++l)
        for (double z : tr.pre[l]) mask.push_back(z > 0.0);
    return mask;
}

// Every coordinate of a 32-unit network's gradient against central
// differences; coordinates whose perturbation crosses a rectifier kink are
// excluded. The error per configuration is the relative error of the vector.
Verdict criterion4() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(4);
    const std::vector<ProblemName> names{ProblemName::ZDT3, ProblemName::LZLZK, ProblemName::DTLZ4,
                                         ProblemName::DTLZ5, ProblemName::DTLZ7};
    std::uniform_real_distribution<double> utheta(0.0, 10.0);
    const double h = 1e-6;
    double worst = 0.0;
    std::size_t skipped = 0;
    std::size_t checked = 0;
    for (int config = 0; config < 50; ++config) {
        const auto problem = ProblemSpec::standard(names[config % names.size()]);
        const auto params = MlpParams::init(default_widths(problem.m, problem.d, 32), rng);
        const auto r = sample_simplex(std::vector<double>(problem.m, 1.0), rng);
        ScalarizationSpec spec;
        if (config % 2) {
            spec.kind = ScalarizationKind::LinearScalarization;
        } else {
            spec.penalty_theta = utheta(rng);
            spec.ideal_point = ideal_point(problem);
        }
        const auto lg = loss_and_grad(params, r, spec, problem);
        const auto mask = relu_mask(params, r);
        double diff2 = 0.0;
        double norm2 = 0.0;
        for (std::size_t i = 0; i < params.theta.size(); ++i) {
            auto plus = params;
            auto minus = params;
            plus.theta[i] += h;
            minus.theta[i] -= h;
            if (relu_mask(plus, r) != mask || relu_mask(minus, r) != mask) {
                ++skipped;
                continue;
            }
            const double fd =
                (loss_and_grad(plus, r, spec, problem).loss - loss_and_grad(minus, r, spec, problem).loss) / (2.0 * h);
            diff2 += (fd - lg.grad[i]) * (fd - lg.grad[i]);
            norm2 += fd * fd;
            ++checked;
        }
        worst = std::max(worst, std::sqrt(diff2 / std::max(norm2, 1e-300)));
    }
    const double secs = seconds_since(t0);
    Verdict v;
    v.pass = worst < 1e-4 && secs < 120.0;
    v.detail = "max relative error " + fmt(worst, 3) + " over 50 configurations (" + std::to_string(checked) +
               " coordinates, " + std::to_string(skipped) + " kink crossings skipped), " + fmt(secs, 3) + " s";
    return v;
}

// ---------------------------------------------------------------- 5

SelectedSet observations(const DirichletMixture& mix, std::size_t n, RandomStream& rng) {
    SelectedSet obs;
    for (const auto& x : sample_mixture(mix, n, rng)) {
        obs.indices.push_back(obs.rows.size());
        obs.rows.emplace_back(x.values().begin(), x.values().end());
    }
    return obs;
}

double first_mean(const DirichletParams& c) { return c[0] / c.total(); }

Verdict criterion5() {
    const auto t0 = Clock::now();
    std::vector<double> err_single;
    std::vector<double> err_pair;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        RandomStream rng(seed);
        McmcConfig cfg;
        cfg.steps = 10000;

        cfg.kappa = 1;
        const DirichletMixture one({DirichletParams({20.0, 20.0})}, {1.0});
        const auto fit1 = fit_mixture(observations(one, 500, rng), DirichletMixture::uniform(2, 1), cfg, rng);
        err_single.push_back(std::abs(first_mean(fit1.mixture.components()[0]) - 0.5));

        cfg.kappa = 2;
        const DirichletMixture two({DirichletParams({40.0, 5.0}), DirichletParams({5.0, 40.0})}, {0.5, 0.5});
        const auto fit2 = fit_mixture(observations(two, 500, rng), DirichletMixture::uniform(2, 2), cfg, rng);
        double a = first_mean(fit2.mixture.components()[0]);
        double b = first_mean(fit2.mixture.components()[1]);
        if (a < b) std::swap(a, b);  // best label permutation for two components
        err_pair.push_back(std::max(std::abs(a - 40.0 / 45.0), std::abs(b - 5.0 / 45.0)));
    }
    const double med1 = median(err_single);
    const double med2 = median(err_pair);
    const double secs = seconds_since(t0);
    Verdict v;
    v.pass = med1 <= 0.05 && med2 <= 0.08 && secs < 120.0;
    v.detail = "median mean error Dir(20,20) " + fmt(med1, 3) + " (tol 0.05), two-component " + fmt(med2, 3) +
               " (tol 0.08), " + fmt(secs, 3) + " s";
    return v;
}

// ---------------------------------------------------------------- 6

RunSpec default_spec(ProblemName name, SamplingMode mode, std::uint64_t seed, std::size_t kappa = 4) {
    RunSpec s;
    s.problem = ProblemSpec::standard(name);
    s.config.mode = mode;
    s.config.seed = seed;
    s.config.kappa = kappa;
    s.id = std::string(to_string(name)) + "-" + std::string(to_string(mode)) + "-s" + std::to_string(seed) + "-k" +
           std::to_string(kappa);
    return s;
}

std::vector<RunOutput> run_all(const std::vector<RunSpec>& specs, const fs::path& out, std::size_t jobs) {
    RunOptions opt;
    opt.out_dir = out;
    opt.plots = true;
    opt.jobs = jobs;
    opt.log = &std::cerr;
    return execute_all(specs, opt);
}

Verdict criterion6(const fs::path& out, std::size_t jobs) {
    const auto t0 = Clock::now();
    std::vector<RunSpec> specs;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        specs.push_back(default_spec(ProblemName::ZDT3, SamplingMode::DdpsMcmc, seed));
        specs.push_back(default_spec(ProblemName::ZDT3, SamplingMode::FixedDirichlet, seed));
        specs.push_back(default_spec(ProblemName::DTLZ7, SamplingMode::DdpsMcmc, seed));
    }
    const auto results = run_all(specs, out / "criterion6", jobs);
    std::vector<double> zdt_ddps, zdt_fixed, dtlz7;
    double slowest = 0.0;
    for (const auto& r : results) {
        slowest = std::max(slowest, r.record.wall_clock_seconds);
        std::cerr << "  " << r.spec.id << ": IGD " << r.record.final_igd << ", HV " << r.record.final_hv << ", "
                  << r.record.epochs.size() << " epochs, " << r.record.wall_clock_seconds << " s\n";
        if (r.spec.problem.name == ProblemName::DTLZ7)
            dtlz7.push_back(r.record.final_igd);
        else
            (r.spec.config.mode == SamplingMode::DdpsMcmc ? zdt_ddps : zdt_fixed).push_back(r.record.final_igd);
    }
    // Final IGD is read as the median over the three seeds.
    const double md = median(zdt_ddps);
    const double mf = median(zdt_fixed);
    const double m7 = median(dtlz7);
    Verdict v;
    v.pass = md <= 0.05 && md < mf && m7 <= 0.10 && slowest <= 1800.0;
    v.detail = "ZDT3 median IGD ddps " + fmt(md) + " (tol 0.05) vs fixed " + fmt(mf) + "; DTLZ7 median IGD ddps " +
               fmt(m7) + " (tol 0.10); slowest run " + fmt(slowest, 4) + " s; total " +
               fmt(seconds_since(t0), 5) + " s";
    return v;
}

// ---------------------------------------------------------------- 7

// Fraction of 10^4 mixture draws within 0.15 of the front's normalized image.
// Front points are taken relative to the ideal point and projected onto the
// simplex, the same map that produces the mixture's training observations.
double concentration(const DirichletMixture& mix, const ProblemSpec& problem, RandomStream& rng) {
    const auto front = true_front(problem, 2000);
    const auto z = ideal_point(problem);
    std::vector<Row> image;
    for (const auto& f : front) {
        Row g(f.size());
        double s = 0.0;
        for (std::size_t k = 0; k < f.size(); ++k) s += g[k] = f[k] - z[k];
        if (s <= 0.0) continue;
        for (double& v : g) v /= s;
        image.push_back(std::move(g));
    }
    const auto draws = sample_mixture(mix, 10000, rng);
    std::size_t near = 0;
    for (const auto& x : draws) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : image) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < p.size(); ++k) d2 += (x[k] - p[k]) * (x[k] - p[k]);
            best = std::min(best, d2);
        }
        near += std::sqrt(best) <= 0.15;
    }
    return static_cast<double>(near) / static_cast<double>(draws.size());
}

Verdict criterion7(const fs::path& out, std::size_t jobs) {
    const auto t0 = Clock::now();
    const std::vector<RunSpec> specs{default_spec(ProblemName::DTLZ7, SamplingMode::DdpsMcmc, 1, 4),
                                     default_spec(ProblemName::DTLZ7, SamplingMode::DdpsMcmc, 1, 1)};
    const auto results = run_all(specs, out / "criterion7", jobs);
    RandomStream rng(7);
    const double c4 = concentration(results[0].record.final_mixture, specs[0].problem, rng);
    const double c1 = concentration(results[1].record.final_mixture, specs[1].problem, rng);
    for (const auto& r : results)
        write_text_file(r.dir / "mixture.svg",
                        mixture_heatmap_svg(r.record.final_mixture, r.spec.id + "  kappa " +
                                                                        std::to_string(r.spec.config.kappa)));
    const double uniform = concentration(DirichletMixture::uniform(3, 1), specs[0].problem, rng);
    const double secs = seconds_since(t0);
    Verdict v;
    v.pass = c4 >= 0.6 && c1 < 0.6 && secs <= 1800.0;
    v.detail = "concentration kappa=4 " + fmt(c4) + " (need >= 0.6), kappa=1 " + fmt(c1) +
               " (need < 0.6), uniform baseline " + fmt(uniform) + ", " + fmt(secs, 4) + " s";
    return v;
}

// ---------------------------------------------------------------- 8

Verdict criterion8(const fs::path& out) {
    const auto t0 = Clock::now();
    auto spec = default_spec(ProblemName::DTLZ7, SamplingMode::DdpsMcmc, 11);
    spec.config.epochs = 5;
    const auto a = execute_run(spec, out / "criterion8" / "a", true);
    const auto b = execute_run(spec, out / "criterion8" / "b", true);
    const auto ja = strip_wall_clock(json::parse(read_text_file(a.dir / "run.json"))).dump(2);
    const auto jb = strip_wall_clock(json::parse(read_text_file(b.dir / "run.json"))).dump(2);
    const bool same_json = ja == jb;
    const bool same_front = read_text_file(a.dir / "front.csv") == read_text_file(b.dir / "front.csv");
    const bool same_ckpt = read_text_file(a.dir / "checkpoint.bin") == read_text_file(b.dir / "checkpoint.bin");
    Verdict v;
    v.pass = same_json && same_front && same_ckpt;
    v.detail = std::string("run.json ") + (same_json ? "identical" : "differs") + ", front.csv " +
               (same_front ? "identical" : "differs") + ", checkpoint.bin " + (same_ckpt ? "identical" : "differs") +
               ", " + fmt(seconds_since(t0), 3) + " s";
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance checks"};
    int only = 0;
    std::string out = (fs::temp_directory_path() / "ddps_acceptance").string();
    std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
    app.add_option("--only", only, "run a single criterion (1-8)")->check(CLI::Range(1, 8));
    app.add_option("--out", out, "directory for training artifacts");
    app.add_option("--jobs", jobs, "parallel training runs")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    const fs::path out_dir(out);
    const std::vector<std::function<Verdict()>> criteria{
        criterion1,
        criterion2,
        criterion3,
        criterion4,
        criterion5,
        [&] { return criterion6(out_dir, jobs); },
        [&] { return criterion7(out_dir, jobs); },
        [&] { return criterion8(out_dir); },
    };
    int failures = 0;
    for (int i = 1; i <= 8; ++i) {
        if (only != 0 && only != i) continue;
        Verdict v;
        try {
            v = criteria[i - 1]();
        } catch (const std::exception& e) {
            v = {false, std::string("error: ") + e.what()};
        }
        std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << i << ": " << v.detail << std::endl;
        failures += !v.pass;
    }
    return failures == 0 ? 0 : 1;
}
