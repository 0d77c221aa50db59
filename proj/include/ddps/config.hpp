#pragma once

// Experiment configuration: an INI-style file with one section per batch of
// runs. Grammar (keys are case-sensitive, values are trimmed):
//
//   [experiment]            output directory, plot toggle, worker count
//   out = runs
//   plots = true
//   jobs = 1
//
//   [defaults]              training keys shared by every run section
//   epochs = 1000
//
//   [run:zdt3]              one batch; NAME becomes the run-id prefix
//   problem = ZDT3
//   modes = ddps, fixed
//   seeds = 1, 2, 3
//
// Each batch expands to the Cartesian product modes x seeds, with run ids
// "NAME-MODE-sSEED". Lines starting with ';' or '#' are comments.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "ddps/problems.hpp"
#include "ddps/trainer.hpp"

namespace ddps {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(std::string_view s) {
    auto b = s.begin();
    auto e = s.end();
    while (b != e && std::isspace(static_cast<unsigned char>(*b))) ++b;
    while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1)))) --e;
    return {b, e};
}

inline std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t comma = s.find(',', start);
        const std::size_t end = comma == std::string_view::npos ? s.size() : comma;
        std::string item = trim(s.substr(start, end - start));
        if (!item.empty()) out.push_back(std::move(item));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline double parse_real(const std::string& key, std::string_view v) {
    const std::string s = trim(v);
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError("key '" + key + "': expected a number, got '" + s + "'");
    return x;
}

inline std::uint64_t parse_count(const std::string& key, std::string_view v) {
    const std::string s = trim(v);
    std::uint64_t x = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError("key '" + key + "': expected a non-negative integer, got '" + s + "'");
    return x;
}

inline bool parse_flag(const std::string& key, std::string_view v) {
    std::string s = trim(v);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError("key '" + key + "': expected a boolean, got '" + s + "'");
}

inline std::vector<double> parse_reals(const std::string& key, std::string_view v) {
    std::vector<double> out;
    for (const auto& item : split_list(v)) out.push_back(parse_real(key, item));
    return out;
}

}  // namespace detail

inline std::vector<std::uint64_t> parse_seed_list(std::string_view v) {
    std::vector<std::uint64_t> out;
    for (const auto& item : detail::split_list(v)) out.push_back(detail::parse_count("seeds", item));
    if (out.empty()) throw ConfigError("seed list is empty");
    return out;
}

inline std::vector<SamplingMode> parse_mode_list(std::string_view v) {
    std::vector<SamplingMode> out;
    for (const auto& item : detail::split_list(v)) {
        auto mode = parse_mode(item);
        if (!mode) throw ConfigError("unknown mode '" + item + "' (expected ddps or fixed)");
        out.push_back(*mode);
    }
    if (out.empty()) throw ConfigError("mode list is empty");
    return out;
}

/// Sets one training key on `cfg`. Returns false when `key` is not a
/// training key; throws ConfigError on a malformed value.
inline bool apply_training_key(TrainConfig& cfg, const std::string& key, const std::string& value) {
    using namespace detail;
    using Setter = std::function<void(TrainConfig&, const std::string&)>;
    static const std::map<std::string, Setter> setters = {
        {"epochs", [](TrainConfig& c, const std::string& v) { c.epochs = parse_count("epochs", v); }},
        {"n_prefs", [](TrainConfig& c, const std::string& v) { c.n_prefs = parse_count("n_prefs", v); }},
        {"gamma", [](TrainConfig& c, const std::string& v) { c.gamma = parse_real("gamma", v); }},
        {"kappa", [](TrainConfig& c, const std::string& v) { c.kappa = parse_count("kappa", v); }},
        {"mcmc_steps", [](TrainConfig& c, const std::string& v) { c.mcmc.steps = parse_count("mcmc_steps", v); }},
        {"mcmc_mu", [](TrainConfig& c, const std::string& v) { c.mcmc.mu = parse_real("mcmc_mu", v); }},
        {"mcmc_sigma", [](TrainConfig& c, const std::string& v) { c.mcmc.sigma = parse_real("mcmc_sigma", v); }},
        {"hastings_corrected",
         [](TrainConfig& c, const std::string& v) { c.mcmc.hastings_corrected = parse_flag("hastings_corrected", v); }},
        {"align_labels",
         [](TrainConfig& c, const std::string& v) { c.mcmc.align_labels = parse_flag("align_labels", v); }},
        {"scalarization",
         [](TrainConfig& c, const std::string& v) {
             const std::string s = trim(v);
             if (s == "pb" || s == "penalty_boundary")
                 c.scalarization.kind = ScalarizationKind::PenaltyBoundary;
             else if (s == "linear" || s == "ls")
                 c.scalarization.kind = ScalarizationKind::LinearScalarization;
             else
                 throw ConfigError("key 'scalarization': expected pb or linear, got '" + s + "'");
         }},
        {"penalty_theta",
         [](TrainConfig& c, const std::string& v) { c.scalarization.penalty_theta = parse_real("penalty_theta", v); }},
        {"ideal_point",
         [](TrainConfig& c, const std::string& v) {
             c.scalarization.ideal_point = trim(v) == "auto" ? std::vector<double>{} : parse_reals("ideal_point", v);
         }},
        {"lr", [](TrainConfig& c, const std::string& v) { c.opt.lr = parse_real("lr", v); }},
        {"beta1", [](TrainConfig& c, const std::string& v) { c.opt.beta1 = parse_real("beta1", v); }},
        {"beta2", [](TrainConfig& c, const std::string& v) { c.opt.beta2 = parse_real("beta2", v); }},
        {"eps", [](TrainConfig& c, const std::string& v) { c.opt.eps = parse_real("eps", v); }},
        {"fixed_alpha", [](TrainConfig& c, const std::string& v) { c.fixed_alpha = parse_reals("fixed_alpha", v); }},
        {"early_stop_patience",
         [](TrainConfig& c, const std::string& v) { c.early_stop_patience = parse_count("early_stop_patience", v); }},
        {"warmup_epochs",
         [](TrainConfig& c, const std::string& v) { c.warmup_epochs = parse_count("warmup_epochs", v); }},
        {"update_every", [](TrainConfig& c, const std::string& v) { c.update_every = parse_count("update_every", v); }},
        {"pref_batch", [](TrainConfig& c, const std::string& v) { c.pref_batch = parse_count("pref_batch", v); }},
        {"hidden", [](TrainConfig& c, const std::string& v) { c.hidden = parse_count("hidden", v); }},
        {"front_size", [](TrainConfig& c, const std::string& v) { c.front_size = parse_count("front_size", v); }},
        {"epoch_scaled_selection",
         [](TrainConfig& c, const std::string& v) {
             c.epoch_scaled_selection = parse_flag("epoch_scaled_selection", v);
         }},
    };
    const auto it = setters.find(key);
    if (it == setters.end()) return false;
    it->second(cfg, value);
    return true;
}

struct RunSpec {
    std::string id;
    ProblemSpec problem;
    TrainConfig config;
};

struct BatchSpec {
    std::string name;
    ProblemName problem = ProblemName::ZDT3;
    std::optional<std::size_t> d;
    std::vector<SamplingMode> modes{SamplingMode::DdpsMcmc};
    std::vector<std::uint64_t> seeds{1};
    TrainConfig base;
};

struct ExperimentConfig {
    std::vector<BatchSpec> batches;
    std::string out_dir = "runs";
    bool plots = true;
    std::size_t jobs = 1;

    /// Replaces every batch's seed list.
    void override_seeds(const std::vector<std::uint64_t>& seeds) {
        for (auto& b : batches) b.seeds = seeds;
    }

    /// Cartesian product of each batch; validates every run and the uniqueness of ids.
    [[nodiscard]] std::vector<RunSpec> expand() const {
        if (batches.empty()) throw ConfigError("configuration defines no [run:NAME] section");
        std::vector<RunSpec> runs;
        std::set<std::string> ids;
        for (const auto& b : batches) {
            ProblemSpec problem;
            try {
                problem = b.d ? ProblemSpec::with_dim(b.problem, *b.d) : ProblemSpec::standard(b.problem);
            } catch (const std::invalid_argument& e) {
                throw ConfigError("[run:" + b.name + "]: " + e.what());
            }
            for (SamplingMode mode : b.modes) {
                for (std::uint64_t seed : b.seeds) {
                    RunSpec r;
                    r.id = b.name + "-" + std::string(to_string(mode)) + "-s" + std::to_string(seed);
                    r.problem = problem;
                    r.config = b.base;
                    r.config.mode = mode;
                    r.config.seed = seed;
                    try {
                        r.problem.validate();
                        r.config.validate();
                        if (!r.config.scalarization.ideal_point.empty() &&
                            r.config.scalarization.ideal_point.size() != problem.m)
                            throw std::invalid_argument("ideal_point length does not match objective count");
                        if (!r.config.fixed_alpha.empty() && r.config.fixed_alpha.size() != problem.m)
                            throw std::invalid_argument("fixed_alpha length does not match objective count");
                    } catch (const std::invalid_argument& e) {
                        throw ConfigError("run '" + r.id + "': " + e.what());
                    }
                    if (!ids.insert(r.id).second) throw ConfigError("duplicate run id '" + r.id + "'");
                    runs.push_back(std::move(r));
                }
            }
        }
        return runs;
    }
};

inline ExperimentConfig parse_experiment(std::istream& is) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config syntax: ") + e.what());
    }

    ExperimentConfig out;
    TrainConfig defaults;
    std::optional<std::vector<SamplingMode>> default_modes;
    std::optional<std::vector<std::uint64_t>> default_seeds;

    // [experiment] and [defaults] apply regardless of their position in the file.
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty())
            throw ConfigError("key '" + section + "' appears outside any section");
        if (section == "experiment") {
            for (const auto& [key, v] : body) {
                const std::string value = v.data();
                if (key == "out")
                    out.out_dir = detail::trim(value);
                else if (key == "plots")
                    out.plots = detail::parse_flag(key, value);
                else if (key == "jobs")
                    out.jobs = detail::parse_count(key, value);
                else
                    throw ConfigError("[experiment]: unknown key '" + key + "'");
            }
        } else if (section == "defaults") {
            for (const auto& [key, v] : body) {
                if (key == "modes")
                    default_modes = parse_mode_list(v.data());
                else if (key == "seeds")
                    default_seeds = parse_seed_list(v.data());
                else if (!apply_training_key(defaults, key, v.data()))
                    throw ConfigError("[defaults]: unknown key '" + key + "'");
            }
        } else if (section.rfind("run:", 0) != 0) {
            throw ConfigError("unknown section [" + section + "]");
        }
    }
    if (out.jobs < 1) throw ConfigError("[experiment]: jobs must be >= 1");

    for (const auto& [section, body] : tree) {
        if (section.rfind("run:", 0) != 0) continue;
        BatchSpec b;
        b.name = detail::trim(section.substr(4));
        if (b.name.empty()) throw ConfigError("[" + section + "]: empty run name");
        for (char c : b.name)
            if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'))
                throw ConfigError("[" + section + "]: run names may use letters, digits, '_', '-', '.'");
        b.base = defaults;
        if (default_modes) b.modes = *default_modes;
        if (default_seeds) b.seeds = *default_seeds;
        bool have_problem = false;
        for (const auto& [key, v] : body) {
            const std::string value = v.data();
            if (key == "problem") {
                auto p = parse_problem(detail::trim(value));
                if (!p) throw ConfigError("[" + section + "]: unknown problem '" + value + "'");
                b.problem = *p;
                have_problem = true;
            } else if (key == "d") {
                b.d = detail::parse_count(key, value);
            } else if (key == "modes") {
                b.modes = parse_mode_list(value);
            } else if (key == "seeds") {
                b.seeds = parse_seed_list(value);
            } else if (!apply_training_key(b.base, key, value)) {
                throw ConfigError("[" + section + "]: unknown key '" + key + "'");
            }
        }
        if (!have_problem) throw ConfigError("[" + section + "]: missing 'problem'");
        out.batches.push_back(std::move(b));
    }
    if (out.batches.empty()) throw ConfigError("configuration defines no [run:NAME] section");
    return out;
}

inline ExperimentConfig parse_experiment(const std::string& text) {
    std::istringstream is(text);
    return parse_experiment(is);
}

inline ExperimentConfig load_experiment(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config file '" + path + "'");
    return parse_experiment(is);
}

}  // namespace ddps
