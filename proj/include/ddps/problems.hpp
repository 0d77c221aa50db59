#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <limits>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ddps/pareto.hpp"

namespace ddps {

enum class ProblemName { ZDT3, LZLZK, DTLZ4, DTLZ5, DTLZ7 };

inline std::string_view to_string(ProblemName p) {
    switch (p) {
        case ProblemName::ZDT3: return "ZDT3";
        case ProblemName::LZLZK: return "LZLZK";
        case ProblemName::DTLZ4: return "DTLZ4";
        case ProblemName::DTLZ5: return "DTLZ5";
        case ProblemName::DTLZ7: return "DTLZ7";
    }
    return "?";
}

inline std::optional<ProblemName> parse_problem(std::string_view s) {
    for (auto p : {ProblemName::ZDT3, ProblemName::LZLZK, ProblemName::DTLZ4, ProblemName::DTLZ5, ProblemName::DTLZ7}) {
        std::string_view name = to_string(p);
        if (s.size() == name.size() &&
            std::equal(s.begin(), s.end(), name.begin(), [](char a, char b) { return std::toupper(a) == b; }))
            return p;
    }
    return std::nullopt;
}

struct ProblemSpec {
    ProblemName name = ProblemName::ZDT3;
    std::size_t d = 30;
    std::size_t m = 2;

    /// Literature defaults: ZDT3 d=30, LZLZK d=20, DTLZ4/5 d=7, DTLZ7 d=22.
    static ProblemSpec standard(ProblemName name) {
        switch (name) {
            case ProblemName::ZDT3: return {name, 30, 2};
            case ProblemName::LZLZK: return {name, 20, 2};
            case ProblemName::DTLZ4: return {name, 7, 3};
            case ProblemName::DTLZ5: return {name, 7, 3};
            case ProblemName::DTLZ7: return {name, 22, 3};
        }
        throw std::invalid_argument("unknown problem");
    }

    static ProblemSpec with_dim(ProblemName name, std::size_t d) {
        ProblemSpec s = standard(name);
        s.d = d;
        s.validate();
        return s;
    }

    void validate() const {
        const std::size_t expected_m =
            (name == ProblemName::ZDT3 || name == ProblemName::LZLZK) ? 2 : 3;
        if (m != expected_m) throw std::invalid_argument(std::string(to_string(name)) + ": wrong objective count");
        if (d < m) throw std::invalid_argument(std::string(to_string(name)) + ": d must be >= m");
    }

    /// HV anchor used for this problem's reported hypervolume.
    [[nodiscard]] std::vector<double> hv_reference() const {
        switch (name) {
            case ProblemName::ZDT3:
            case ProblemName::LZLZK: return {2.0, 2.0};
            case ProblemName::DTLZ4:
            case ProblemName::DTLZ5: return {2.0, 2.0, 2.0};
            case ProblemName::DTLZ7: return {2.0, 2.0, 7.0};
        }
        return {};
    }

    [[nodiscard]] std::size_t default_front_size() const { return m == 2 ? 1000 : 10000; }
};

using ObjectiveVector = std::vector<double>;

/// Row-major m x d Jacobian of the objectives.
struct Jacobian {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Jacobian(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

struct Evaluation {
    ObjectiveVector f;
    Jacobian jac;
};

namespace detail {

inline void check_box(const ProblemSpec& spec, std::span<const double> x) {
    if (x.size() != spec.d)
        throw std::invalid_argument(std::string(to_string(spec.name)) + ": expected " + std::to_string(spec.d) +
                                    " decision variables, got " + std::to_string(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!(x[i] >= 0.0 && x[i] <= 1.0))
            throw std::domain_error(std::string(to_string(spec.name)) + ": x[" + std::to_string(i) +
                                    "] outside [0, 1]");
}

inline Evaluation zdt3(std::span<const double> x) {
    const std::size_t d = x.size();
    const double pi = std::numbers::pi;
    Evaluation e{ObjectiveVector(2), Jacobian(2, d)};
    const double f1 = x[0];
    double tail = 0.0;
    for (std::size_t i = 1; i < d; ++i) tail += x[i];
    const double dg = d > 1 ? 9.0 / static_cast<double>(d - 1) : 0.0;
    const double g = 1.0 + dg * tail;
    const double ratio = f1 / g;
    const double s = std::sin(10.0 * pi * f1);
    const double c = std::cos(10.0 * pi * f1);
    // f2 = g - sqrt(f1 g) - f1 sin(10 pi f1)
    const double root = std::sqrt(f1 * g);
    e.f[0] = f1;
    e.f[1] = g * (1.0 - std::sqrt(ratio) - ratio * s);
    e.jac(0, 0) = 1.0;
    const double droot_df1 = root > 0.0 ? 0.5 * g / root : 0.0;
    const double droot_dg = root > 0.0 ? 0.5 * f1 / root : 0.0;
    e.jac(1, 0) = -droot_df1 - s - f1 * 10.0 * pi * c;
    const double df2_dg = 1.0 - droot_dg;
    for (std::size_t i = 1; i < d; ++i) e.jac(1, i) = df2_dg * dg;
    return e;
}

inline Evaluation lzlzk(std::span<const double> x) {
    const std::size_t d = x.size();
    const double shift = 1.0 / std::sqrt(static_cast<double>(d));
    Evaluation e{ObjectiveVector(2), Jacobian(2, d)};
    double s1 = 0.0;
    double s2 = 0.0;
    for (double xi : x) {
        const double y = 2.0 * xi - 1.0;
        s1 += (y - shift) * (y - shift);
        s2 += (y + shift) * (y + shift);
    }
    const double e1 = std::exp(-s1);
    const double e2 = std::exp(-s2);
    e.f[0] = 1.0 - e1;
    e.f[1] = 1.0 - e2;
    for (std::size_t j = 0; j < d; ++j) {
        const double y = 2.0 * x[j] - 1.0;
        // chain rule through y = 2x - 1
        e.jac(0, j) = 2.0 * (y - shift) * e1 * 2.0;
        e.jac(1, j) = 2.0 * (y + shift) * e2 * 2.0;
    }
    return e;
}

inline double g_sphere(std::span<const double> x, std::size_t m, std::vector<double>& grad) {
    double g = 0.0;
    for (std::size_t i = m - 1; i < x.size(); ++i) {
        g += (x[i] - 0.5) * (x[i] - 0.5);
        grad[i] = 2.0 * (x[i] - 0.5);
    }
    return g;
}

inline Evaluation dtlz4(std::span<const double> x) {
    constexpr double kExponent = 100.0;
    const std::size_t d = x.size();
    const double hp = std::numbers::pi / 2.0;
    Evaluation e{ObjectiveVector(3), Jacobian(3, d)};
    std::vector<double> dg(d, 0.0);
    const double g = g_sphere(x, 3, dg);
    const double t1 = std::pow(x[0], kExponent) * hp;
    const double t2 = std::pow(x[1], kExponent) * hp;
    const double dt1 = x[0] > 0.0 ? kExponent * std::pow(x[0], kExponent - 1.0) * hp : 0.0;
    const double dt2 = x[1] > 0.0 ? kExponent * std::pow(x[1], kExponent - 1.0) * hp : 0.0;
    const double c1 = std::cos(t1), s1 = std::sin(t1), c2 = std::cos(t2), s2 = std::sin(t2);
    const double r = 1.0 + g;
    e.f = {r * c1 * c2, r * c1 * s2, r * s1};
    e.jac(0, 0) = -r * s1 * c2 * dt1;
    e.jac(0, 1) = -r * c1 * s2 * dt2;
    e.jac(1, 0) = -r * s1 * s2 * dt1;
    e.jac(1, 1) = r * c1 * c2 * dt2;
    e.jac(2, 0) = r * c1 * dt1;
    for (std::size_t j = 2; j < d; ++j) {
        e.jac(0, j) = c1 * c2 * dg[j];
        e.jac(1, j) = c1 * s2 * dg[j];
        e.jac(2, j) = s1 * dg[j];
    }
    return e;
}

inline Evaluation dtlz5(std::span<const double> x) {
    const std::size_t d = x.size();
    const double pi = std::numbers::pi;
    Evaluation e{ObjectiveVector(3), Jacobian(3, d)};
    std::vector<double> dg(d, 0.0);
    const double g = g_sphere(x, 3, dg);
    const double r = 1.0 + g;
    const double t1 = x[0] * pi / 2.0;
    // theta2 = pi / (4 (1 + g)) * (1 + 2 g x2)
    const double t2 = pi / (4.0 * r) * (1.0 + 2.0 * g * x[1]);
    const double dt2_dx2 = pi / (4.0 * r) * 2.0 * g;
    const double dt2_dg = pi / 4.0 * (2.0 * x[1] * r - (1.0 + 2.0 * g * x[1])) / (r * r);
    const double c1 = std::cos(t1), s1 = std::sin(t1), c2 = std::cos(t2), s2 = std::sin(t2);
    e.f = {r * c1 * c2, r * c1 * s2, r * s1};
    e.jac(0, 0) = -r * s1 * c2 * pi / 2.0;
    e.jac(1, 0) = -r * s1 * s2 * pi / 2.0;
    e.jac(2, 0) = r * c1 * pi / 2.0;
    e.jac(0, 1) = -r * c1 * s2 * dt2_dx2;
    e.jac(1, 1) = r * c1 * c2 * dt2_dx2;
    for (std::size_t j = 2; j < d; ++j) {
        e.jac(0, j) = (c1 * c2 - r * c1 * s2 * dt2_dg) * dg[j];
        e.jac(1, j) = (c1 * s2 + r * c1 * c2 * dt2_dg) * dg[j];
        e.jac(2, j) = s1 * dg[j];
    }
    return e;
}

// h-term summand of DTLZ7: f (1 + sin(3 pi f)).
inline double dtlz7_bump(double f) { return f * (1.0 + std::sin(3.0 * std::numbers::pi * f)); }

inline Evaluation dtlz7(std::span<const double> x) {
    const std::size_t d = x.size();
    const double pi = std::numbers::pi;
    Evaluation e{ObjectiveVector(3), Jacobian(3, d)};
    const double k = static_cast<double>(d - 2);
    double tail = 0.0;
    for (std::size_t i = 2; i < d; ++i) tail += x[i];
    const double g = 1.0 + 9.0 / k * tail;
    const double r = 1.0 + g;
    const double h = 3.0 - (dtlz7_bump(x[0]) + dtlz7_bump(x[1])) / r;
    e.f = {x[0], x[1], r * h};
    e.jac(0, 0) = 1.0;
    e.jac(1, 1) = 1.0;
    // f3 = 3 r - bump(x1) - bump(x2)
    for (std::size_t j = 0; j < 2; ++j)
        e.jac(2, j) = -(1.0 + std::sin(3.0 * pi * x[j]) + x[j] * 3.0 * pi * std::cos(3.0 * pi * x[j]));
    for (std::size_t j = 2; j < d; ++j) e.jac(2, j) = 3.0 * 9.0 / k;
    return e;
}

}  // namespace detail

/// Objectives and their Jacobian with respect to the decision vector.
inline Evaluation evaluate_with_gradient(const ProblemSpec& spec, std::span<const double> x) {
    spec.validate();
    detail::check_box(spec, x);
    switch (spec.name) {
        case ProblemName::ZDT3: return detail::zdt3(x);
        case ProblemName::LZLZK: return detail::lzlzk(x);
        case ProblemName::DTLZ4: return detail::dtlz4(x);
        case ProblemName::DTLZ5: return detail::dtlz5(x);
        case ProblemName::DTLZ7: return detail::dtlz7(x);
    }
    throw std::invalid_argument("unknown problem");
}

inline ObjectiveVector evaluate(const ProblemSpec& spec, std::span<const double> x) {
    return evaluate_with_gradient(spec, x).f;
}

namespace detail {

// Points t_0 < ... of a 1-D grid on [lo, hi] where curve(t) is strictly below
// every earlier value, i.e. the non-dominated arcs of (t, curve(t)).
template <typename Curve>
std::vector<double> improving_arcs(double lo, double hi, std::size_t grid, Curve curve) {
    std::vector<double> keep;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid; ++i) {
        const double t = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid - 1);
        const double v = curve(t);
        if (v < best) {
            keep.push_back(t);
            best = v;
        }
    }
    return keep;
}

template <typename T>
std::vector<T> thin_evenly(const std::vector<T>& all, std::size_t n) {
    if (all.size() <= n) return all;
    std::vector<T> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t idx = (n == 1) ? 0 : (i * (all.size() - 1)) / (n - 1);
        out.push_back(all[idx]);
    }
    return out;
}

// Uniform lattice on the 2-simplex with the given number of divisions.
inline std::vector<Row> simplex_lattice3(std::size_t divisions) {
    std::vector<Row> pts;
    const double h = static_cast<double>(divisions);
    for (std::size_t i = 0; i <= divisions; ++i)
        for (std::size_t j = 0; i + j <= divisions; ++j)
            pts.push_back({static_cast<double>(i) / h, static_cast<double>(j) / h,
                           static_cast<double>(divisions - i - j) / h});
    return pts;
}

}  // namespace detail

/// n points spread over the analytical Pareto front. Disconnected fronts are
/// obtained by filtering a dense parameter grid for non-domination.
inline std::vector<ObjectiveVector> true_front(const ProblemSpec& spec, std::size_t n) {
    spec.validate();
    if (n < 2) throw std::invalid_argument("true_front: need at least two points");
    const double pi = std::numbers::pi;
    std::vector<ObjectiveVector> out;
    switch (spec.name) {
        case ProblemName::ZDT3: {
            auto f2 = [pi](double f1) { return 1.0 - std::sqrt(f1) - f1 * std::sin(10.0 * pi * f1); };
            const auto arcs = detail::improving_arcs(0.0, 1.0, std::max<std::size_t>(200000, 50 * n), f2);
            for (double f1 : detail::thin_evenly(arcs, n)) out.push_back({f1, f2(f1)});
            break;
        }
        case ProblemName::LZLZK: {
            // optimal set: y = t / sqrt(d) * 1, t in [-1, 1]
            for (std::size_t i = 0; i < n; ++i) {
                const double t = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
                out.push_back({1.0 - std::exp(-(t - 1.0) * (t - 1.0)), 1.0 - std::exp(-(t + 1.0) * (t + 1.0))});
            }
            break;
        }
        case ProblemName::DTLZ4: {
            std::size_t div = 1;
            while ((div + 1) * (div + 2) / 2 < n) ++div;
            for (auto p : detail::thin_evenly(detail::simplex_lattice3(div), n)) {
                const double norm = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
                out.push_back({p[0] / norm, p[1] / norm, p[2] / norm});
            }
            break;
        }
        case ProblemName::DTLZ5: {
            for (std::size_t i = 0; i < n; ++i) {
                const double t = pi / 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
                const double c = std::cos(t) / std::sqrt(2.0);
                out.push_back({c, c, std::sin(t)});
            }
            break;
        }
        case ProblemName::DTLZ7: {
            // f3 = 6 - bump(f1) - bump(f2) on g = 1; (f1, f2) is non-dominated
            // iff each coordinate lies on an arc where -bump keeps improving.
            auto neg = [](double f) { return -detail::dtlz7_bump(f); };
            std::size_t side = 2;
            std::vector<double> arcs;
            for (;;) {
                arcs = detail::improving_arcs(0.0, 1.0, side, neg);
                if (arcs.size() * arcs.size() >= n) break;
                side += std::max<std::size_t>(1, side / 64);
            }
            std::vector<ObjectiveVector> all;
            all.reserve(arcs.size() * arcs.size());
            for (double a : arcs)
                for (double b : arcs) all.push_back({a, b, 6.0 - detail::dtlz7_bump(a) - detail::dtlz7_bump(b)});
            out = detail::thin_evenly(all, n);
            break;
        }
    }
    return out;
}

/// Componentwise minimum over the analytical front.
inline std::vector<double> ideal_point(const ProblemSpec& spec) {
    const auto front = true_front(spec, spec.default_front_size());
    std::vector<double> lo(spec.m, std::numeric_limits<double>::infinity());
    for (const auto& f : front)
        for (std::size_t k = 0; k < spec.m; ++k) lo[k] = std::min(lo[k], f[k]);
    return lo;
}

/// Writes objective vectors as CSV with header f1..fm and 17 significant digits.
inline void write_front_csv(std::ostream& os, const std::vector<ObjectiveVector>& pts) {
    const std::size_t m = pts.empty() ? 0 : pts.front().size();
    for (std::size_t k = 0; k < m; ++k) os << (k ? "," : "") << 'f' << (k + 1);
    os << '\n';
    char buf[32];
    for (const auto& p : pts) {
        for (std::size_t k = 0; k < p.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", p[k]);
            os << (k ? "," : "") << buf;
        }
        os << '\n';
    }
}

}  // namespace ddps
