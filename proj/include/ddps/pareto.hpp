#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ddps/simplex.hpp"

namespace ddps {

using Row = std::vector<double>;

/// N objective vectors of equal length m collected during one epoch.
/// `prefs`, when non-empty, holds the preference vector that produced each row.
struct LossMatrix {
    std::vector<Row> rows;
    std::vector<Row> prefs;

    [[nodiscard]] std::size_t size() const { return rows.size(); }
    [[nodiscard]] bool empty() const { return rows.empty(); }
    [[nodiscard]] std::size_t cols() const { return rows.empty() ? 0 : rows.front().size(); }

    void validate() const {
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (rows[i].size() != cols())
                throw std::invalid_argument("LossMatrix row " + std::to_string(i) + " has inconsistent length");
        if (!prefs.empty() && prefs.size() != rows.size())
            throw std::invalid_argument("LossMatrix preference tags do not match row count");
    }
};

/// Rows chosen by nds_cd_select, in selection-priority order.
struct SelectedSet {
    std::vector<std::size_t> indices;
    std::vector<Row> rows;

    [[nodiscard]] std::size_t size() const { return rows.size(); }
    [[nodiscard]] bool empty() const { return rows.empty(); }
};

/// Pareto dominance for minimization: a is no worse everywhere and better somewhere.
inline bool dominates(std::span<const double> a, std::span<const double> b) {
    bool strictly = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] > b[k]) return false;
        if (a[k] < b[k]) strictly = true;
    }
    return strictly;
}

namespace detail {

inline void require_points(const std::vector<Row>& pts, const char* what) {
    if (pts.empty()) throw std::invalid_argument(std::string(what) + ": empty input");
    const std::size_t m = pts.front().size();
    for (const auto& p : pts)
        if (p.size() != m) throw std::invalid_argument(std::string(what) + ": rows differ in length");
}

}  // namespace detail

/// Number of points dominating each point.
inline std::vector<std::size_t> dominance_rank(const std::vector<Row>& points) {
    detail::require_points(points, "dominance_rank");
    std::vector<std::size_t> rank(points.size(), 0);
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = 0; j < points.size(); ++j)
            if (i != j && dominates(points[j], points[i])) ++rank[i];
    return rank;
}

/// Fast non-dominated sort; returns the front index of every point.
inline std::vector<std::size_t> non_dominated_sort(const std::vector<Row>& points) {
    detail::require_points(points, "non_dominated_sort");
    const std::size_t n = points.size();
    std::vector<std::vector<std::size_t>> dominated_by_me(n);
    std::vector<std::size_t> counter(n, 0);
    std::vector<std::size_t> front(n, 0);
    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dominates(points[i], points[j])) {
                dominated_by_me[i].push_back(j);
                ++counter[j];
            } else if (dominates(points[j], points[i])) {
                dominated_by_me[j].push_back(i);
                ++counter[i];
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (counter[i] == 0) current.push_back(i);
    std::size_t level = 0;
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t i : current) {
            front[i] = level;
            for (std::size_t j : dominated_by_me[i])
                if (--counter[j] == 0) next.push_back(j);
        }
        current = std::move(next);
        ++level;
    }
    return front;
}

/// Indices of the first front, in input order.
inline std::vector<std::size_t> non_dominated_indices(const std::vector<Row>& points) {
    std::vector<std::size_t> out;
    if (points.empty()) return out;
    const auto fronts = non_dominated_sort(points);
    for (std::size_t i = 0; i < fronts.size(); ++i)
        if (fronts[i] == 0) out.push_back(i);
    return out;
}

inline std::vector<Row> non_dominated_subset(const std::vector<Row>& points) {
    std::vector<Row> out;
    for (std::size_t i : non_dominated_indices(points)) out.push_back(points[i]);
    return out;
}

/// NSGA-II crowding distance. Per objective the points are stably sorted; the
/// first and last get +inf, interior points add (next - prev) / (max - min),
/// and objectives with a zero range contribute nothing.
inline std::vector<double> crowding_distance(const std::vector<Row>& front) {
    detail::require_points(front, "crowding_distance");
    const std::size_t n = front.size();
    const std::size_t m = front.front().size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, 0.0);
    std::vector<std::size_t> order(n);
    for (std::size_t k = 0; k < m; ++k) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return front[a][k] < front[b][k]; });
        dist[order.front()] = inf;
        dist[order.back()] = inf;
        const double range = front[order.back()][k] - front[order.front()][k];
        if (range <= 0.0) continue;
        for (std::size_t i = 1; i + 1 < n; ++i)
            dist[order[i]] += (front[order[i + 1]][k] - front[order[i - 1]][k]) / range;
    }
    return dist;
}

/// Shifts columns that contain negative entries by their minimum, so every
/// entry is nonnegative. Columns that are already nonnegative are untouched.
inline std::vector<Row> shift_nonnegative(std::vector<Row> rows) {
    if (rows.empty()) return rows;
    const std::size_t m = rows.front().size();
    for (std::size_t k = 0; k < m; ++k) {
        double lo = 0.0;
        for (const auto& r : rows) lo = std::min(lo, r[k]);
        if (lo < 0.0)
            for (auto& r : rows) r[k] -= lo;
    }
    return rows;
}

/// Divides each row by its sum and clamps it onto the open simplex.
/// Negative entries are shifted away column-wise first.
inline LossMatrix normalize_rows(const LossMatrix& d) {
    d.validate();
    LossMatrix out{shift_nonnegative(d.rows), d.prefs};
    for (std::size_t i = 0; i < out.rows.size(); ++i) {
        auto& row = out.rows[i];
        const double total = std::accumulate(row.begin(), row.end(), 0.0);
        if (!(total > 0.0) || !std::isfinite(total))
            throw std::domain_error("normalize_rows: row " + std::to_string(i) + " has zero sum");
        for (double& x : row) x /= total;
        detail::clamp_to_simplex(row);
    }
    return out;
}

/// min(max(floor(gamma * epoch * n), 1), n)
inline std::size_t selection_size(double gamma, std::size_t epoch, std::size_t n) {
    const double raw = std::floor(gamma * static_cast<double>(epoch) * static_cast<double>(n) + 1e-9);
    if (raw >= static_cast<double>(n)) return n;
    return std::max<std::size_t>(static_cast<std::size_t>(raw), 1);
}

/// NDS-CD subset selection. Rows are admitted by ascending front index; within
/// a front they are ordered by descending crowding distance, then by row
/// values lexicographically, then by original index.
inline SelectedSet nds_cd_select(const LossMatrix& d, double gamma, std::size_t epoch) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("nds_cd_select: gamma must lie in (0, 1)");
    if (epoch < 1) throw std::invalid_argument("nds_cd_select: epoch must be at least 1");
    detail::require_points(d.rows, "nds_cd_select");
    const std::size_t target = selection_size(gamma, epoch, d.size());
    const auto fronts = non_dominated_sort(d.rows);
    const std::size_t n_fronts = *std::max_element(fronts.begin(), fronts.end()) + 1;

    std::vector<std::vector<std::size_t>> members(n_fronts);
    for (std::size_t i = 0; i < fronts.size(); ++i) members[fronts[i]].push_back(i);

    SelectedSet out;
    for (auto& idx : members) {
        if (out.indices.size() >= target) break;
        std::vector<Row> pts;
        pts.reserve(idx.size());
        for (std::size_t i : idx) pts.push_back(d.rows[i]);
        const auto cd = crowding_distance(pts);
        std::vector<std::size_t> order(idx.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (cd[a] != cd[b]) return cd[a] > cd[b];
            if (pts[a] != pts[b]) return pts[a] < pts[b];
            return idx[a] < idx[b];
        });
        for (std::size_t o : order) {
            if (out.indices.size() >= target) break;
            out.indices.push_back(idx[o]);
            out.rows.push_back(d.rows[idx[o]]);
        }
    }
    return out;
}

}  // namespace ddps
