#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ddps/pareto.hpp"

namespace ddps {

namespace detail {

// Exact 2-D hypervolume of points already strictly inside the reference box.
inline double hv2d_inside(std::vector<std::pair<double, double>> pts, double r1, double r2) {
    std::sort(pts.begin(), pts.end());
    double volume = 0.0;
    double best_y = r2;
    for (const auto& [x, y] : pts) {
        if (y < best_y) {
            volume += (r1 - x) * (best_y - y);
            best_y = y;
        }
    }
    return volume;
}

}  // namespace detail

/// Exact hypervolume dominated by `points` and bounded by `ref` (minimization).
/// Two objectives use a sweep; three objectives slice along the third axis.
inline double hypervolume(const std::vector<Row>& points, const std::vector<double>& ref) {
    const std::size_t m = ref.size();
    if (m < 2 || m > 3) throw std::invalid_argument("hypervolume: only 2 or 3 objectives are supported");
    std::vector<Row> inside;
    for (const auto& p : points) {
        if (p.size() != m) throw std::invalid_argument("hypervolume: point/reference dimension mismatch");
        bool ok = true;
        for (std::size_t k = 0; k < m; ++k) ok = ok && p[k] < ref[k];
        if (ok) inside.push_back(p);
    }
    if (inside.empty()) return 0.0;

    if (m == 2) {
        std::vector<std::pair<double, double>> pts;
        pts.reserve(inside.size());
        for (const auto& p : inside) pts.emplace_back(p[0], p[1]);
        return detail::hv2d_inside(std::move(pts), ref[0], ref[1]);
    }

    std::sort(inside.begin(), inside.end(), [](const Row& a, const Row& b) { return a[2] < b[2]; });
    double volume = 0.0;
    std::vector<std::pair<double, double>> slice;
    for (std::size_t i = 0; i < inside.size(); ++i) {
        slice.emplace_back(inside[i][0], inside[i][1]);
        const double next_z = (i + 1 < inside.size()) ? inside[i + 1][2] : ref[2];
        const double depth = next_z - inside[i][2];
        if (depth > 0.0) volume += depth * detail::hv2d_inside(slice, ref[0], ref[1]);
    }
    return volume;
}

/// Mean distance from each reference-front point to its nearest approximation point.
inline double igd(const std::vector<Row>& approx, const std::vector<Row>& reference_front) {
    if (approx.empty() || reference_front.empty()) throw std::invalid_argument("igd: empty input");
    const std::size_t m = reference_front.front().size();
    for (const auto& p : approx)
        if (p.size() != m) throw std::invalid_argument("igd: dimension mismatch");
    double total = 0.0;
    for (const auto& r : reference_front) {
        if (r.size() != m) throw std::invalid_argument("igd: dimension mismatch");
        double best = std::numeric_limits<double>::infinity();
        for (const auto& a : approx) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < m; ++k) d2 += (a[k] - r[k]) * (a[k] - r[k]);
            best = std::min(best, d2);
        }
        total += std::sqrt(best);
    }
    return total / static_cast<double>(reference_front.size());
}

}  // namespace ddps
