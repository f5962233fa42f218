#include "ylab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

namespace ylab {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (size_t j = 1; j <= b.size(); ++j) {
            const size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

const std::vector<std::string>& key_list() {
    static const std::vector<std::string> keys = {
        "study",        "n",
        "length",       "seed",
        "outdir",       "dt",
        "t_final",      "cfl",
        "snapshot_stride", "initial",
        "amplitude",    "spectrum_power",
        "patch_radius", "patch_delta",
        "patch_roughness", "sweep",
        "besov_p",      "ref_dt_factor",
        "measure_s_t",  "perturb_seed",
        "perturb_amplitude", "theta_alpha",
        "s_t",          "sigma",
        "b_initial",    "b_amplitude",
        "b_seed",       "eta",
        "viscosity",    "theta"};
    return keys;
}

bool parse_double(const std::string& v, double& out) {
    try {
        size_t pos = 0;
        out = std::stod(v, &pos);
        return pos == v.size();
    } catch (...) {
        return false;
    }
}

bool parse_int(const std::string& v, long long& out) {
    try {
        size_t pos = 0;
        out = std::stoll(v, &pos);
        return pos == v.size();
    } catch (...) {
        return false;
    }
}

bool parse_bool(const std::string& v, bool& out) {
    if (v == "true" || v == "1") {
        out = true;
        return true;
    }
    if (v == "false" || v == "0") {
        out = false;
        return true;
    }
    return false;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::vector<std::string> config_errors(const std::string& text) {
    ExperimentConfig cfg;
    std::vector<std::string> errors;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        auto bad_value = [&](const std::string& why) {
            errors.push_back("key '" + key + "': " + why + " (got '" + value + "')");
        };
        auto as_double = [&](double& slot, const char* pre) {
            double d;
            if (!parse_double(value, d)) {
                bad_value(std::string("expected a number; ") + pre);
                return;
            }
            slot = d;
        };
        auto as_int = [&](int& slot, const char* pre) {
            long long d;
            if (!parse_int(value, d)) {
                bad_value(std::string("expected an integer; ") + pre);
                return;
            }
            slot = static_cast<int>(d);
        };

        if (key == "study") cfg.study = value;
        else if (key == "n") as_int(cfg.n, "n must be a power of two >= 8");
        else if (key == "length") as_double(cfg.length, "length > 0");
        else if (key == "seed") {
            long long d;
            if (parse_int(value, d) && d >= 0) cfg.seed = static_cast<std::uint64_t>(d);
            else bad_value("seed must be a nonnegative integer");
        } else if (key == "outdir") cfg.outdir = value;
        else if (key == "dt") as_double(cfg.dt, "dt > 0");
        else if (key == "t_final") as_double(cfg.t_final, "t_final > 0");
        else if (key == "cfl") as_double(cfg.cfl, "0 < cfl <= 1");
        else if (key == "snapshot_stride") as_int(cfg.snapshot_stride, "snapshot_stride >= 1");
        else if (key == "initial") cfg.initial = value;
        else if (key == "amplitude") as_double(cfg.amplitude, "amplitude real");
        else if (key == "spectrum_power") as_double(cfg.spectrum_power, "spectrum_power > 0");
        else if (key == "patch_radius") as_double(cfg.patch_radius, "patch_radius > 0");
        else if (key == "patch_delta") as_double(cfg.patch_delta, "patch_delta >= 2 dx");
        else if (key == "patch_roughness") as_double(cfg.patch_roughness, "patch_roughness >= 0");
        else if (key == "sweep") {
            cfg.sweep.clear();
            std::istringstream vs(value);
            std::string item;
            bool ok = true;
            while (std::getline(vs, item, ',')) {
                double d;
                if (!parse_double(trim(item), d)) {
                    ok = false;
                    break;
                }
                cfg.sweep.push_back(d);
            }
            if (!ok) bad_value("expected a comma-separated list of numbers");
        } else if (key == "besov_p") as_double(cfg.besov_p, "besov_p >= 1");
        else if (key == "ref_dt_factor") as_int(cfg.ref_dt_factor, "ref_dt_factor >= 1");
        else if (key == "measure_s_t") {
            bool b;
            if (parse_bool(value, b)) cfg.measure_s_t = b;
            else bad_value("expected true or false");
        } else if (key == "perturb_seed") {
            long long d;
            if (parse_int(value, d) && d >= 0) cfg.perturb_seed = static_cast<std::uint64_t>(d);
            else bad_value("perturb_seed must be a nonnegative integer");
        } else if (key == "perturb_amplitude") as_double(cfg.perturb_amplitude, "perturb_amplitude real");
        else if (key == "theta_alpha") as_double(cfg.theta_alpha, "theta_alpha > 0");
        else if (key == "s_t") as_double(cfg.s_t, "s_t > 0");
        else if (key == "sigma") as_double(cfg.sigma, "sigma > 0");
        else if (key == "b_initial") cfg.b_initial = value;
        else if (key == "b_amplitude") as_double(cfg.b_amplitude, "b_amplitude real");
        else if (key == "b_seed") {
            long long d;
            if (parse_int(value, d) && d >= 0) cfg.b_seed = static_cast<std::uint64_t>(d);
            else bad_value("b_seed must be a nonnegative integer");
        } else if (key == "eta") as_double(cfg.eta, "1 <= eta <= 2");
        else if (key == "viscosity") as_double(cfg.viscosity, "viscosity >= 0");
        else if (key == "theta") as_double(cfg.theta, "theta > 0");
        else {
            size_t best = static_cast<size_t>(-1);
            std::string nearest;
            for (const std::string& k : key_list()) {
                const size_t d = edit_distance(key, k);
                if (d < best) {
                    best = d;
                    nearest = k;
                }
            }
            errors.push_back("unknown key '" + key + "' (nearest valid key: '" + nearest + "')");
        }
    }

    // Range validation against the module preconditions.
    auto require = [&](bool ok, const std::string& msg) {
        if (!ok) errors.push_back(msg);
    };
    const bool study_known = cfg.study == "perturbation" || cfg.study == "inviscid" ||
                             cfg.study == "em_limit" || cfg.study == "diagnostics";
    require(study_known,
            "study must be one of perturbation | inviscid | em_limit | diagnostics");
    require(cfg.n >= 8 && (cfg.n & (cfg.n - 1)) == 0, "n must be a power of two >= 8");
    require(cfg.length > 0.0, "length > 0");
    require(cfg.dt > 0.0, "dt > 0");
    require(cfg.t_final > 0.0, "t_final > 0");
    if (cfg.dt > 0.0 && cfg.t_final > 0.0) {
        const double steps = cfg.t_final / cfg.dt;
        require(std::abs(steps - std::llround(steps)) <= 1e-9 * std::max(1.0, steps),
                "t_final must be an integer multiple of dt");
        if (cfg.snapshot_stride >= 1) {
            const long long ns = std::llround(steps);
            require(ns % cfg.snapshot_stride == 0,
                    "snapshot_stride must divide t_final/dt");
        }
    }
    require(cfg.cfl > 0.0 && cfg.cfl <= 1.0, "0 < cfl <= 1");
    require(cfg.snapshot_stride >= 1, "snapshot_stride >= 1");
    require(cfg.viscosity >= 0.0, "viscosity >= 0");
    require(cfg.sigma > 0.0, "sigma > 0");
    require(cfg.eta >= 1.0 && cfg.eta <= 2.0, "1 <= eta <= 2");
    require(cfg.theta > 0.0, "theta > 0");
    require(cfg.besov_p >= 1.0, "besov_p >= 1");
    require(cfg.ref_dt_factor >= 1, "ref_dt_factor >= 1");
    require(cfg.theta_alpha > 0.0, "theta_alpha > 0");
    require(cfg.s_t > 0.0, "s_t > 0");
    require(cfg.spectrum_power > 0.0, "spectrum_power > 0");

    const bool initial_known = cfg.initial == "shear" || cfg.initial == "taylor_green" ||
                               cfg.initial == "smooth_random" || cfg.initial == "smoothed_patch";
    require(initial_known,
            "initial must be one of shear | taylor_green | smooth_random | smoothed_patch");
    const bool b_initial_known = cfg.b_initial == "shear" || cfg.b_initial == "taylor_green" ||
                                 cfg.b_initial == "smooth_random" ||
                                 cfg.b_initial == "smoothed_patch";
    require(b_initial_known,
            "b_initial must be one of shear | taylor_green | smooth_random | smoothed_patch");
    if (cfg.initial == "smoothed_patch" && cfg.n >= 8) {
        require(cfg.patch_delta >= 2.0 * cfg.length / cfg.n, "patch_delta >= 2 dx");
        require(cfg.patch_radius > 0.0, "patch_radius > 0");
    }

    if (cfg.study != "diagnostics") {
        require(cfg.sweep.size() >= 4, "sweep needs at least 4 values");
        bool positive = true;
        for (double v : cfg.sweep) positive = positive && v > 0.0;
        require(positive, "sweep values must be positive");
        if (cfg.sweep.size() >= 2 && positive) {
            bool dec = true, inc = true;
            for (size_t i = 1; i < cfg.sweep.size(); ++i) {
                dec = dec && cfg.sweep[i] < cfg.sweep[i - 1];
                inc = inc && cfg.sweep[i] > cfg.sweep[i - 1];
            }
            if (cfg.study == "em_limit")
                require(inc, "sweep must be strictly increasing (speed of light values)");
            else
                require(dec, "sweep must be strictly decreasing (eps values)");
        }
    }

    return errors;
}

ExperimentConfig parse_config(const std::string& text) {
    const std::vector<std::string> errors = config_errors(text);
    if (!errors.empty()) {
        std::string joined = "invalid config:";
        for (const std::string& e : errors) joined += "\n  - " + e;
        throw ConfigError(joined);
    }
    // reparse without validation paths triggering
    ExperimentConfig out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "study") out.study = value;
        else if (key == "n") out.n = std::stoi(value);
        else if (key == "length") out.length = std::stod(value);
        else if (key == "seed") out.seed = std::stoull(value);
        else if (key == "outdir") out.outdir = value;
        else if (key == "dt") out.dt = std::stod(value);
        else if (key == "t_final") out.t_final = std::stod(value);
        else if (key == "cfl") out.cfl = std::stod(value);
        else if (key == "snapshot_stride") out.snapshot_stride = std::stoi(value);
        else if (key == "initial") out.initial = value;
        else if (key == "amplitude") out.amplitude = std::stod(value);
        else if (key == "spectrum_power") out.spectrum_power = std::stod(value);
        else if (key == "patch_radius") out.patch_radius = std::stod(value);
        else if (key == "patch_delta") out.patch_delta = std::stod(value);
        else if (key == "patch_roughness") out.patch_roughness = std::stod(value);
        else if (key == "sweep") {
            out.sweep.clear();
            std::istringstream vs(value);
            std::string item;
            while (std::getline(vs, item, ',')) out.sweep.push_back(std::stod(trim(item)));
        } else if (key == "besov_p") out.besov_p = std::stod(value);
        else if (key == "ref_dt_factor") out.ref_dt_factor = std::stoi(value);
        else if (key == "measure_s_t") out.measure_s_t = (value == "true" || value == "1");
        else if (key == "perturb_seed") out.perturb_seed = std::stoull(value);
        else if (key == "perturb_amplitude") out.perturb_amplitude = std::stod(value);
        else if (key == "theta_alpha") out.theta_alpha = std::stod(value);
        else if (key == "s_t") out.s_t = std::stod(value);
        else if (key == "sigma") out.sigma = std::stod(value);
        else if (key == "b_initial") out.b_initial = value;
        else if (key == "b_amplitude") out.b_amplitude = std::stod(value);
        else if (key == "b_seed") out.b_seed = std::stoull(value);
        else if (key == "eta") out.eta = std::stod(value);
        else if (key == "viscosity") out.viscosity = std::stod(value);
        else if (key == "theta") out.theta = std::stod(value);
    }
    return out;
}

std::string render_config(const ExperimentConfig& c) {
    std::ostringstream s;
    s << "study = " << c.study << "\n";
    s << "n = " << c.n << "\n";
    s << "length = " << fmt(c.length) << "\n";
    s << "seed = " << c.seed << "\n";
    s << "outdir = " << c.outdir << "\n";
    s << "dt = " << fmt(c.dt) << "\n";
    s << "t_final = " << fmt(c.t_final) << "\n";
    s << "cfl = " << fmt(c.cfl) << "\n";
    s << "snapshot_stride = " << c.snapshot_stride << "\n";
    s << "initial = " << c.initial << "\n";
    s << "amplitude = " << fmt(c.amplitude) << "\n";
    s << "spectrum_power = " << fmt(c.spectrum_power) << "\n";
    s << "patch_radius = " << fmt(c.patch_radius) << "\n";
    s << "patch_delta = " << fmt(c.patch_delta) << "\n";
    s << "patch_roughness = " << fmt(c.patch_roughness) << "\n";
    if (!c.sweep.empty()) {
        s << "sweep = ";
        for (size_t i = 0; i < c.sweep.size(); ++i)
            s << (i ? ", " : "") << fmt(c.sweep[i]);
        s << "\n";
    }
    s << "besov_p = " << fmt(c.besov_p) << "\n";
    s << "ref_dt_factor = " << c.ref_dt_factor << "\n";
    s << "measure_s_t = " << (c.measure_s_t ? "true" : "false") << "\n";
    s << "perturb_seed = " << c.perturb_seed << "\n";
    s << "perturb_amplitude = " << fmt(c.perturb_amplitude) << "\n";
    s << "theta_alpha = " << fmt(c.theta_alpha) << "\n";
    s << "s_t = " << fmt(c.s_t) << "\n";
    s << "sigma = " << fmt(c.sigma) << "\n";
    s << "b_initial = " << c.b_initial << "\n";
    s << "b_amplitude = " << fmt(c.b_amplitude) << "\n";
    s << "b_seed = " << c.b_seed << "\n";
    s << "eta = " << fmt(c.eta) << "\n";
    s << "viscosity = " << fmt(c.viscosity) << "\n";
    s << "theta = " << fmt(c.theta) << "\n";
    return s.str();
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
    const std::string text = render_config(cfg);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char byte : text) {
        h ^= byte;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace ylab
