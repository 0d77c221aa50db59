#pragma once

// Serialization and reporting: RunRecord JSON, canonical CSV, result tables
// with median summaries and average ranks, and self-contained SVG plots.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "ddps/metrics.hpp"
#include "ddps/problems.hpp"
#include "ddps/simplex.hpp"
#include "ddps/trainer.hpp"

namespace ddps {

using json = nlohmann::json;

// ---------------------------------------------------------------- CSV

/// Shortest text that is exact for doubles: printf("%.17g").
inline std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    bool operator==(const CsvTable&) const = default;
};

namespace detail {

inline bool needs_quotes(std::string_view f) {
    return f.find_first_of(",\"\n\r") != std::string_view::npos;
}

inline void write_field(std::string& out, std::string_view f) {
    if (!needs_quotes(f)) {
        out += f;
        return;
    }
    out += '"';
    for (char c : f) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
}

}  // namespace detail

/// Comma-separated, '\n' line endings, a trailing newline, RFC 4180 quoting
/// only where a field requires it.
inline std::string to_csv(const CsvTable& t) {
    std::string out;
    auto line = [&](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out += ',';
            detail::write_field(out, fields[i]);
        }
        out += '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
    return out;
}

inline CsvTable parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> lines;
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool line_open = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        line_open = true;
        if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            fields.push_back(std::move(field));
            field.clear();
            lines.push_back(std::move(fields));
            fields.clear();
            line_open = false;
        } else {
            field += c;
        }
    }
    if (quoted) throw std::runtime_error("csv: unterminated quoted field");
    if (line_open) {
        fields.push_back(std::move(field));
        lines.push_back(std::move(fields));
    }
    if (lines.empty()) throw std::runtime_error("csv: missing header");
    CsvTable t;
    t.header = std::move(lines.front());
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].size() != t.header.size())
            throw std::runtime_error("csv: row " + std::to_string(i) + " has " + std::to_string(lines[i].size()) +
                                     " fields, header has " + std::to_string(t.header.size()));
        t.rows.push_back(std::move(lines[i]));
    }
    return t;
}

/// Objective vectors as a table with columns f1..fm.
inline CsvTable front_table(const std::vector<ObjectiveVector>& pts, std::size_t m) {
    CsvTable t;
    for (std::size_t k = 0; k < m; ++k) t.header.push_back("f" + std::to_string(k + 1));
    for (const auto& p : pts) {
        if (p.size() != m) throw std::invalid_argument("front_table: dimension mismatch");
        std::vector<std::string> row;
        for (double v : p) row.push_back(format_real(v));
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline std::vector<ObjectiveVector> front_from_table(const CsvTable& t) {
    std::vector<ObjectiveVector> pts;
    for (const auto& r : t.rows) {
        ObjectiveVector p;
        for (const auto& f : r) p.push_back(std::stod(f));
        pts.push_back(std::move(p));
    }
    return pts;
}

// ---------------------------------------------------------------- JSON

inline json mixture_to_json(const DirichletMixture& mix) {
    json alpha = json::array();
    for (const auto& c : mix.components()) alpha.push_back(c.alpha());
    return {{"weights", mix.weights()}, {"alpha", alpha}};
}

inline DirichletMixture mixture_from_json(const json& j) {
    std::vector<DirichletParams> comps;
    for (const auto& a : j.at("alpha")) comps.emplace_back(a.get<std::vector<double>>());
    return {std::move(comps), j.at("weights").get<std::vector<double>>()};
}

inline json config_to_json(const TrainConfig& c) {
    return {
        {"epochs", c.epochs},
        {"n_prefs", c.n_prefs},
        {"gamma", c.gamma},
        {"kappa", c.kappa},
        {"mcmc",
         {{"steps", c.mcmc.steps},
          {"mu", c.mcmc.mu},
          {"sigma", c.mcmc.sigma},
          {"hastings_corrected", c.mcmc.hastings_corrected},
          {"align_labels", c.mcmc.align_labels}}},
        {"scalarization",
         {{"kind", c.scalarization.kind == ScalarizationKind::PenaltyBoundary ? "pb" : "linear"},
          {"penalty_theta", c.scalarization.penalty_theta},
          {"ideal_point", c.scalarization.ideal_point}}},
        {"opt", {{"lr", c.opt.lr}, {"beta1", c.opt.beta1}, {"beta2", c.opt.beta2}, {"eps", c.opt.eps}}},
        {"seed", c.seed},
        {"mode", to_string(c.mode)},
        {"fixed_alpha", c.fixed_alpha},
        {"early_stop_patience", c.early_stop_patience},
        {"warmup_epochs", c.warmup_epochs},
        {"update_every", c.update_every},
        {"pref_batch", c.pref_batch},
        {"hidden", c.hidden},
        {"front_size", c.front_size},
        {"epoch_scaled_selection", c.epoch_scaled_selection},
    };
}

inline json run_to_json(const RunRecord& r, const std::string& run_id = {}) {
    json epochs = json::array();
    for (const auto& e : r.epochs) {
        epochs.push_back({
            {"epoch", e.epoch},
            {"hv", e.hv},
            {"igd", e.igd},
            {"mean_loss", e.mean_loss},
            {"acceptance_rate", e.acceptance_rate ? json(*e.acceptance_rate) : json(nullptr)},
            {"selected", e.selected},
            {"mcmc_never_moved", e.mcmc_never_moved},
            {"mixture", mixture_to_json(e.mixture)},
        });
    }
    return {
        {"run",
         {{"id", run_id},
          {"problem", r.problem},
          {"d", r.d},
          {"m", r.m},
          {"mode", to_string(r.mode)},
          {"seed", r.seed}}},
        {"config", config_to_json(r.config)},
        {"epochs", std::move(epochs)},
        {"final",
         {{"best_epoch", r.best_epoch},
          {"hv", r.final_hv},
          {"igd", r.final_igd},
          {"epochs_completed", r.epochs.size()},
          {"mcmc_fits", r.mcmc_fits},
          {"mixture", mixture_to_json(r.final_mixture)},
          {"checkpoint", r.checkpoint},
          {"warnings", r.warnings}}},
        {"wall_clock_seconds", r.wall_clock_seconds},
    };
}

/// Copy of a run document without wall-clock fields, for reproducibility checks.
inline json strip_wall_clock(json j) {
    j.erase("wall_clock_seconds");
    return j;
}

// ---------------------------------------------------------------- tables

struct RunSummary {
    std::string id;
    std::string problem;
    std::string mode;
    std::uint64_t seed = 0;
    double hv = 0.0;
    double igd = 0.0;
    std::size_t epochs = 0;
    double seconds = 0.0;
};

inline RunSummary summary_from_json(const json& j) {
    RunSummary s;
    const auto& run = j.at("run");
    s.id = run.value("id", std::string{});
    s.problem = run.at("problem").get<std::string>();
    s.mode = run.at("mode").get<std::string>();
    s.seed = run.at("seed").get<std::uint64_t>();
    const auto& fin = j.at("final");
    s.hv = fin.at("hv").get<double>();
    s.igd = fin.at("igd").get<double>();
    s.epochs = fin.at("epochs_completed").get<std::size_t>();
    s.seconds = j.value("wall_clock_seconds", 0.0);
    return s;
}

inline RunSummary read_run_summary(const std::filesystem::path& run_json) {
    std::ifstream is(run_json);
    if (!is) throw std::runtime_error("cannot open " + run_json.string());
    json j = json::parse(is);
    return summary_from_json(j);
}

inline double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median: empty input");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Rank 1 is best; equal values share the mean of the ranks they span.
inline std::vector<double> fractional_ranks(const std::vector<double>& values, bool higher_is_better) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return higher_is_better ? values[a] > values[b] : values[a] < values[b];
    });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

/// Per-run rows sorted by (problem, mode, seed).
inline CsvTable runs_table(std::vector<RunSummary> runs) {
    std::sort(runs.begin(), runs.end(), [](const RunSummary& a, const RunSummary& b) {
        return std::tie(a.problem, a.mode, a.seed, a.id) < std::tie(b.problem, b.mode, b.seed, b.id);
    });
    CsvTable t;
    t.header = {"problem", "mode", "seed", "final_hv", "final_igd", "epochs", "seconds"};
    for (const auto& r : runs)
        t.rows.push_back({r.problem, r.mode, std::to_string(r.seed), format_real(r.hv), format_real(r.igd),
                          std::to_string(r.epochs), format_real(r.seconds)});
    return t;
}

/// Median over seeds per (problem, mode), ranks of those medians across modes
/// within each problem, and one "average" row per mode.
inline CsvTable summary_table(const std::vector<RunSummary>& runs) {
    std::map<std::string, std::map<std::string, std::vector<const RunSummary*>>> groups;
    for (const auto& r : runs) groups[r.problem][r.mode].push_back(&r);

    CsvTable t;
    t.header = {"problem", "mode", "runs", "median_hv", "median_igd", "rank_hv", "rank_igd"};
    std::map<std::string, std::pair<double, double>> rank_sum;
    std::map<std::string, std::size_t> rank_count;
    for (const auto& [problem, modes] : groups) {
        std::vector<std::string> names;
        std::vector<double> hv;
        std::vector<double> igd_v;
        std::vector<std::size_t> counts;
        for (const auto& [mode, rs] : modes) {
            std::vector<double> h;
            std::vector<double> g;
            for (const auto* r : rs) {
                h.push_back(r->hv);
                g.push_back(r->igd);
            }
            names.push_back(mode);
            hv.push_back(median(h));
            igd_v.push_back(median(g));
            counts.push_back(rs.size());
        }
        const auto rh = fractional_ranks(hv, true);
        const auto rg = fractional_ranks(igd_v, false);
        for (std::size_t i = 0; i < names.size(); ++i) {
            t.rows.push_back({problem, names[i], std::to_string(counts[i]), format_real(hv[i]), format_real(igd_v[i]),
                              format_real(rh[i]), format_real(rg[i])});
            rank_sum[names[i]].first += rh[i];
            rank_sum[names[i]].second += rg[i];
            ++rank_count[names[i]];
        }
    }
    for (const auto& [mode, sums] : rank_sum) {
        const double n = static_cast<double>(rank_count[mode]);
        t.rows.push_back({"average", mode, std::to_string(rank_count[mode]), "", "", format_real(sums.first / n),
                          format_real(sums.second / n)});
    }
    return t;
}

// ---------------------------------------------------------------- SVG

namespace detail {

inline std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

inline std::string fmt2(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

inline std::string fmt_tick(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

// Five-stop perceptual palette, t in [0, 1].
inline std::string palette(double t) {
    static constexpr double stops[5][3] = {
        {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
    t = std::clamp(t, 0.0, 1.0) * 4.0;
    const int i = std::min(3, static_cast<int>(t));
    const double f = t - i;
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(stops[i][0] + f * (stops[i + 1][0] - stops[i][0]))),
                  static_cast<int>(std::lround(stops[i][1] + f * (stops[i + 1][1] - stops[i][1]))),
                  static_cast<int>(std::lround(stops[i][2] + f * (stops[i + 1][2] - stops[i][2]))));
    return buf;
}

inline std::string svg_open(double w, double h) {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt2(w) +
           "\" height=\"" + fmt2(h) + "\" viewBox=\"0 0 " + fmt2(w) + " " + fmt2(h) +
           "\" font-family=\"sans-serif\" font-size=\"11\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

inline void scatter_panel(std::string& out, double ox, double oy, double size, std::size_t a, std::size_t b,
                          const std::vector<ObjectiveVector>& approx, const std::vector<ObjectiveVector>& truth) {
    double lo[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    double hi[2] = {-lo[0], -lo[1]};
    for (const auto* set : {&approx, &truth})
        for (const auto& p : *set) {
            lo[0] = std::min(lo[0], p[a]);
            hi[0] = std::max(hi[0], p[a]);
            lo[1] = std::min(lo[1], p[b]);
            hi[1] = std::max(hi[1], p[b]);
        }
    for (int k = 0; k < 2; ++k) {
        if (!std::isfinite(lo[k])) lo[k] = 0.0, hi[k] = 1.0;
        const double pad = std::max(1e-9, 0.05 * (hi[k] - lo[k]));
        lo[k] -= pad;
        hi[k] += pad;
    }
    const double margin = 40.0;
    const double inner = size - 2 * margin;
    auto px = [&](double v) { return ox + margin + inner * (v - lo[0]) / (hi[0] - lo[0]); };
    auto py = [&](double v) { return oy + size - margin - inner * (v - lo[1]) / (hi[1] - lo[1]); };

    out += "<rect x=\"" + fmt2(ox + margin) + "\" y=\"" + fmt2(oy + margin) + "\" width=\"" + fmt2(inner) +
           "\" height=\"" + fmt2(inner) + "\" fill=\"none\" stroke=\"#444\"/>\n";
    const std::string fa = "f" + std::to_string(a + 1);
    const std::string fb = "f" + std::to_string(b + 1);
    out += "<text x=\"" + fmt2(ox + size / 2) + "\" y=\"" + fmt2(oy + size - 8) + "\" text-anchor=\"middle\">" + fa +
           "</text>\n";
    out += "<text x=\"" + fmt2(ox + 12) + "\" y=\"" + fmt2(oy + size / 2) + "\" text-anchor=\"middle\">" + fb +
           "</text>\n";
    out += "<text x=\"" + fmt2(ox + margin) + "\" y=\"" + fmt2(oy + size - margin + 14) + "\">" + fmt_tick(lo[0]) +
           "</text>\n";
    out += "<text x=\"" + fmt2(ox + size - margin) + "\" y=\"" + fmt2(oy + size - margin + 14) +
           "\" text-anchor=\"end\">" + fmt_tick(hi[0]) + "</text>\n";
    out += "<text x=\"" + fmt2(ox + margin - 4) + "\" y=\"" + fmt2(oy + size - margin) + "\" text-anchor=\"end\">" +
           fmt_tick(lo[1]) + "</text>\n";
    out += "<text x=\"" + fmt2(ox + margin - 4) + "\" y=\"" + fmt2(oy + margin + 8) + "\" text-anchor=\"end\">" +
           fmt_tick(hi[1]) + "</text>\n";
    out += "<g fill=\"#9a9a9a\">\n";
    for (const auto& p : truth)
        out += "<circle cx=\"" + fmt2(px(p[a])) + "\" cy=\"" + fmt2(py(p[b])) + "\" r=\"1\"/>\n";
    out += "</g>\n<g fill=\"#d62728\" fill-opacity=\"0.8\">\n";
    for (const auto& p : approx)
        out += "<circle cx=\"" + fmt2(px(p[a])) + "\" cy=\"" + fmt2(py(p[b])) + "\" r=\"2.5\"/>\n";
    out += "</g>\n";
}

}  // namespace detail

/// Scatter of the learned front (red) over the true front (grey). Three
/// objectives are drawn as the pairwise projections f1-f2, f1-f3, f2-f3.
inline std::string front_svg(const std::vector<ObjectiveVector>& approx, const std::vector<ObjectiveVector>& truth,
                             std::size_t m, const std::string& title) {
    if (m != 2 && m != 3) throw std::invalid_argument("front_svg: only 2 or 3 objectives");
    const double panel = 360.0;
    const std::vector<std::pair<std::size_t, std::size_t>> pairs =
        m == 2 ? std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}}
               : std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {0, 2}, {1, 2}};
    const double top = 24.0;
    std::string out = detail::svg_open(panel * static_cast<double>(pairs.size()), panel + top);
    out += "<text x=\"8\" y=\"16\" font-size=\"13\">" + detail::xml_escape(title) + "</text>\n";
    for (std::size_t i = 0; i < pairs.size(); ++i)
        detail::scatter_panel(out, panel * static_cast<double>(i), top, panel, pairs[i].first, pairs[i].second,
                              approx, truth);
    out += "</svg>\n";
    return out;
}

/// Density of a mixture over the simplex. Three components render as a
/// triangle of `resolution`^2 cells colored by log density; two render as a
/// color strip with the density curve above it.
inline std::string mixture_heatmap_svg(const DirichletMixture& mix, const std::string& title,
                                       std::size_t resolution = 40) {
    const std::size_t m = mix.dim();
    if (m != 2 && m != 3) throw std::invalid_argument("mixture_heatmap_svg: only 2 or 3 objectives");
    if (resolution < 2) throw std::invalid_argument("mixture_heatmap_svg: resolution must be >= 2");
    auto logpdf = [&](std::vector<double> x) {
        detail::clamp_to_simplex(x);
        return mixture_log_pdf(x, mix);
    };
    const double w = 420.0;
    const double top = 24.0;
    std::string out;

    if (m == 2) {
        const std::size_t n = resolution * 5;
        std::vector<double> lp(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double r1 = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
            lp[i] = logpdf({r1, 1.0 - r1});
        }
        const double lo = *std::min_element(lp.begin(), lp.end());
        const double hi = *std::max_element(lp.begin(), lp.end());
        const double span = hi > lo ? hi - lo : 1.0;
        const double h = 220.0;
        out = detail::svg_open(w, h + top);
        out += "<text x=\"8\" y=\"16\" font-size=\"13\">" + detail::xml_escape(title) + "</text>\n";
        const double x0 = 30.0;
        const double cell = (w - 60.0) / static_cast<double>(n);
        std::string curve;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = (lp[i] - lo) / span;
            out += "<rect x=\"" + detail::fmt2(x0 + cell * static_cast<double>(i)) + "\" y=\"" +
                   detail::fmt2(top + h - 50) + "\" width=\"" + detail::fmt2(cell + 0.3) +
                   "\" height=\"20\" fill=\"" + detail::palette(t) + "\"/>\n";
            curve += (i ? " " : "") + detail::fmt2(x0 + cell * (static_cast<double>(i) + 0.5)) + "," +
                     detail::fmt2(top + h - 60 - 120 * t);
        }
        out += "<polyline points=\"" + curve + "\" fill=\"none\" stroke=\"#222\"/>\n";
        out += "<text x=\"" + detail::fmt2(x0) + "\" y=\"" + detail::fmt2(top + h - 14) + "\">r1=0</text>\n";
        out += "<text x=\"" + detail::fmt2(w - 30) + "\" y=\"" + detail::fmt2(top + h - 14) +
               "\" text-anchor=\"end\">r1=1</text>\n";
        out += "</svg>\n";
        return out;
    }

    const double side = w - 40.0;
    const double height = side * std::sqrt(3.0) / 2.0;
    // Corners: r1 bottom-left, r2 bottom-right, r3 top.
    auto to_xy = [&](double r2, double r3) {
        return std::pair<double, double>{20.0 + side * (r2 + 0.5 * r3), top + 20.0 + height * (1.0 - r3)};
    };
    struct Cell {
        std::pair<double, double> p[3];
        double lp;
    };
    std::vector<Cell> cells;
    const double n = static_cast<double>(resolution);
    for (std::size_t i = 0; i < resolution; ++i) {
        for (std::size_t j = 0; i + j < resolution; ++j) {
            const double a = static_cast<double>(i);
            const double b = static_cast<double>(j);
            // Upward cell (i,j),(i+1,j),(i,j+1); downward cell completes the rhombus.
            Cell up{{to_xy(a / n, b / n), to_xy((a + 1) / n, b / n), to_xy(a / n, (b + 1) / n)},
                    logpdf({1.0 - (a + b + 2.0 / 3.0) / n, (a + 1.0 / 3.0) / n, (b + 1.0 / 3.0) / n})};
            cells.push_back(up);
            if (i + j + 1 < resolution) {
                Cell down{{to_xy((a + 1) / n, b / n), to_xy((a + 1) / n, (b + 1) / n), to_xy(a / n, (b + 1) / n)},
                          logpdf({1.0 - (a + b + 4.0 / 3.0) / n, (a + 2.0 / 3.0) / n, (b + 2.0 / 3.0) / n})};
                cells.push_back(down);
            }
        }
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& c : cells) {
        lo = std::min(lo, c.lp);
        hi = std::max(hi, c.lp);
    }
    const double span = hi > lo ? hi - lo : 1.0;
    out = detail::svg_open(w, top + height + 50.0);
    out += "<text x=\"8\" y=\"16\" font-size=\"13\">" + detail::xml_escape(title) + "</text>\n";
    for (const auto& c : cells) {
        out += "<polygon points=\"";
        for (int k = 0; k < 3; ++k)
            out += (k ? " " : "") + detail::fmt2(c.p[k].first) + "," + detail::fmt2(c.p[k].second);
        const std::string color = detail::palette((c.lp - lo) / span);
        out += "\" fill=\"" + color + "\" stroke=\"" + color + "\" stroke-width=\"0.3\"/>\n";
    }
    const auto c1 = to_xy(0, 0);
    const auto c2 = to_xy(1, 0);
    const auto c3 = to_xy(0, 1);
    out += "<text x=\"" + detail::fmt2(c1.first) + "\" y=\"" + detail::fmt2(c1.second + 16) + "\">r1</text>\n";
    out += "<text x=\"" + detail::fmt2(c2.first) + "\" y=\"" + detail::fmt2(c2.second + 16) +
           "\" text-anchor=\"end\">r2</text>\n";
    out += "<text x=\"" + detail::fmt2(c3.first) + "\" y=\"" + detail::fmt2(c3.second - 4) +
           "\" text-anchor=\"middle\">r3</text>\n";
    out += "</svg>\n";
    return out;
}

// ---------------------------------------------------------------- files

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << text;
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace ddps
