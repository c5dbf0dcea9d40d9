// config.cpp — key tables, parsing and validation of RunConfig

#include "jcl/cli/config.hpp"

#include "jcl/errors.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace jcl::cli {

namespace {

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& v) {
    double x = 0.0;
    const char* b = v.data();
    const char* e = b + v.size();
    auto [ptr, ec] = std::from_chars(b, e, x);
    if (ec != std::errc() || ptr != e) throw ConfigError("bad number for " + key + ": '" + v + "'");
    return x;
}

int to_int(const std::string& key, const std::string& v) {
    int x = 0;
    const char* b = v.data();
    const char* e = b + v.size();
    auto [ptr, ec] = std::from_chars(b, e, x);
    if (ec != std::errc() || ptr != e) throw ConfigError("bad integer for " + key + ": '" + v + "'");
    return x;
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
    return s;
}

const std::array<const char*, 8> kParamKeys{"g",         "gamma-a", "gamma-sigma", "pump-sigma",
                                            "pump-a",    "gamma-phi", "delta",     "omega-L"};

bool is_param_key(const std::string& k) {
    return std::find(kParamKeys.begin(), kParamKeys.end(), k) != kParamKeys.end();
}

void command_defaults(RunConfig& c) {
    c.params.gamma_a = 0.1;
    c.params.gamma_sigma = 0.00334;
    if (c.command == "sweep" || c.command == "regimes") {
        c.sweep.param = "pump-sigma";
    } else if (c.command == "transitions") {
        c.sweep = {"pump-sigma", 1e-2, 1e2, 121, true};
    } else if (c.command == "spectrum") {
        c.params.P_sigma = 7.0;
        c.spectrum.omega_min = -25.0;
        c.spectrum.omega_max = 25.0;
    } else if (c.command == "mollow-coherent") {
        c.params.gamma_sigma = 1.0;
        c.spectrum.omega_min = -8.0;
        c.spectrum.omega_max = 8.0;
    }
}

void apply(RunConfig& c, const std::string& key, const std::string& v) {
    if (is_param_key(key)) {
        set_param(c, key, to_double(key, v));
    } else if (key == "sweep-param") {
        c.sweep.param = (v == "none") ? std::string{} : v;
    } else if (key == "sweep-min") {
        c.sweep.min = to_double(key, v);
    } else if (key == "sweep-max") {
        c.sweep.max = to_double(key, v);
    } else if (key == "sweep-points") {
        c.sweep.points = to_int(key, v);
    } else if (key == "sweep-scale") {
        if (v != "log" && v != "linear") throw ConfigError("sweep-scale must be log or linear");
        c.sweep.log = v == "log";
    } else if (key == "gamma-a-list") {
        c.gamma_a_list.clear();
        for (const auto& s : split_list(v)) c.gamma_a_list.push_back(to_double(key, s));
    } else if (key == "models") {
        c.models = split_list(v);
    } else if (key == "exact-route") {
        c.exact_route = v;
    } else if (key == "channel") {
        try {
            c.spectrum.channel = channel_from_string(v);
        } catch (const std::exception&) {
            throw ConfigError("channel must be cavity or emitter");
        }
    } else if (key == "method") {
        c.spectrum.method = v;
    } else if (key == "approx-distribution") {
        c.spectrum.distribution = v;
    } else if (key == "omega-min") {
        c.spectrum.omega_min = to_double(key, v);
    } else if (key == "omega-max") {
        c.spectrum.omega_max = to_double(key, v);
    } else if (key == "points") {
        c.spectrum.points = to_int(key, v);
    } else if (key == "vis-delta-max") {
        c.visibility.delta_max = to_double(key, v);
    } else if (key == "vis-gamma-phi-max") {
        c.visibility.gamma_phi_max = to_double(key, v);
    } else if (key == "vis-points") {
        c.visibility.points = to_int(key, v);
    } else if (key == "n-max") {
        c.n_max = to_int(key, v);
    } else if (key == "auto-nmax-cap") {
        c.auto_nmax_cap = to_int(key, v);
    } else if (key == "tol") {
        c.tol = to_double(key, v);
    } else if (key == "out") {
        c.out = v;
    } else if (key == "format") {
        c.format = v;
    } else if (key == "threads") {
        c.threads = to_int(key, v);
    } else {
        throw ConfigError("unknown key '" + key + "'");
    }
}

void validate(const RunConfig& c) {
    auto need = [](bool ok, const std::string& msg) {
        if (!ok) throw ConfigError(msg);
    };
    if (!c.sweep.param.empty()) {
        need(is_param_key(c.sweep.param), "sweep-param must name a model parameter");
        need(c.sweep.min < c.sweep.max, "sweep-min must be below sweep-max");
        need(c.sweep.points >= 2, "sweep-points must be at least 2");
        need(!c.sweep.log || c.sweep.min > 0.0, "log sweeps need sweep-min > 0");
    }
    if (c.command == "sweep" || c.command == "transitions" || c.command == "regimes") {
        need(!c.sweep.param.empty(), c.command + " needs a sweep-param");
    }
    if (c.command == "transitions") need(c.sweep.param == "pump-sigma", "transitions sweeps pump-sigma only");
    for (const auto& m : c.models) {
        need(std::find(kSteadyModels.begin(), kSteadyModels.end(), m) != kSteadyModels.end(),
             "unknown model '" + m + "'");
    }
    need(c.exact_route == "moments" || c.exact_route == "liouvillian", "exact-route must be moments or liouvillian");
    const auto& s = c.spectrum;
    need(s.method == "exact" || s.method == "approx" || s.method == "semiclassical",
         "method must be exact, approx or semiclassical");
    need(s.distribution == "exact" || s.distribution == "poisson" || s.distribution == "cothermal",
         "approx-distribution must be exact, poisson or cothermal");
    need(s.omega_min < s.omega_max, "omega-min must be below omega-max");
    need(s.points >= 2, "points must be at least 2");
    need(c.visibility.points >= 2 && c.visibility.delta_max > 0.0 && c.visibility.gamma_phi_max > 0.0,
         "visibility grid needs vis-points >= 2 and positive extents");
    need(c.n_max >= 0, "n-max must be >= 0 (0 = automatic)");
    need(c.auto_nmax_cap >= 2, "auto-nmax-cap must be >= 2");
    need(c.tol > 0.0, "tol must be positive");
    need(c.format == "csv" || c.format == "json", "format must be csv or json");
    need(c.threads >= 0, "threads must be >= 0");
    try {
        c.params.validate();
        for (double ga : c.gamma_a_list) {
            SystemParams q = c.params;
            q.gamma_a = ga;
            q.validate();
        }
        if (c.command == "mollow-coherent") c.drive().validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace

std::vector<double> SweepSpec::grid() const {
    return log ? logspace(min, max, points) : linspace(min, max, points);
}

LaserDriveParams RunConfig::drive() const {
    return {omega_L, params.delta, params.gamma_sigma, params.gamma_phi};
}

const std::vector<KeyInfo>& config_keys() {
    static const std::vector<KeyInfo> keys{
        {"g", "coupling (the unit of every rate)"},
        {"gamma-a", "cavity decay rate"},
        {"gamma-sigma", "emitter decay rate"},
        {"pump-sigma", "incoherent emitter pump"},
        {"pump-a", "incoherent cavity pump"},
        {"gamma-phi", "pure dephasing"},
        {"delta", "detuning (cavity - emitter, or laser - emitter for mollow-coherent)"},
        {"omega-L", "coherent drive amplitude (mollow-coherent)"},
        {"sweep-param", "parameter to sweep, or none"},
        {"sweep-min", "sweep start"},
        {"sweep-max", "sweep end"},
        {"sweep-points", "number of sweep points"},
        {"sweep-scale", "log or linear"},
        {"gamma-a-list", "comma-separated gamma-a values, one sweep each"},
        {"models", "steady: comma-separated subset of exact,bosonic,truncated_jc,semiclassical,thermal,cothermal"},
        {"exact-route", "moments or liouvillian"},
        {"channel", "cavity or emitter"},
        {"method", "exact, approx or semiclassical"},
        {"approx-distribution", "photon distribution for method=approx: exact, poisson or cothermal"},
        {"omega-min", "spectrum grid start"},
        {"omega-max", "spectrum grid end"},
        {"points", "spectrum grid points"},
        {"vis-delta-max", "visibility map: largest detuning"},
        {"vis-gamma-phi-max", "visibility map: largest dephasing"},
        {"vis-points", "visibility map points per axis"},
        {"n-max", "photon cutoff, 0 for automatic"},
        {"auto-nmax-cap", "largest automatic photon cutoff"},
        {"tol", "truncation convergence tolerance"},
        {"out", "output path, - for stdout"},
        {"format", "csv or json"},
        {"threads", "worker threads, 0 for hardware concurrency"},
    };
    return keys;
}

KeyValues parse_config_text(const std::string& text, const std::string& command) {
    std::vector<std::string> lines;
    {
        std::stringstream ss(text);
        std::string line;
        while (std::getline(ss, line)) lines.push_back(line);
    }
    const bool metadata = std::any_of(lines.begin(), lines.end(),
                                      [](const std::string& l) { return l.rfind("#!", 0) == 0; });
    KeyValues kv;
    std::string section;
    int lineno = 0;
    for (const auto& raw : lines) {
        ++lineno;
        std::string line;
        if (metadata) {
            if (raw.rfind("#!", 0) != 0) continue;
            line = trim(raw.substr(2));
        } else {
            line = trim(raw.substr(0, raw.find('#')));
        }
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": bad section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (metadata) continue;
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "command") continue;
        if (section.empty() || section == "common" || section == command) kv[key] = value;
    }
    return kv;
}

KeyValues read_config_file(const std::string& path, const std::string& command) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), command);
}

RunConfig build_config(const std::string& command, const KeyValues& file, const KeyValues& overrides) {
    if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end()) {
        throw ConfigError("unknown command '" + command + "'");
    }
    RunConfig c;
    c.command = command;
    c.models = kSteadyModels;
    command_defaults(c);
    for (const auto& [k, v] : file) apply(c, k, v);
    for (const auto& [k, v] : overrides) apply(c, k, v);
    validate(c);
    return c;
}

std::string format_double(double x) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), ptr);
}

void set_param(RunConfig& c, const std::string& key, double value) {
    auto& p = c.params;
    if (key == "g") p.g = value;
    else if (key == "gamma-a") p.gamma_a = value;
    else if (key == "gamma-sigma") p.gamma_sigma = value;
    else if (key == "pump-sigma") p.P_sigma = value;
    else if (key == "pump-a") p.P_a = value;
    else if (key == "gamma-phi") p.gamma_phi = value;
    else if (key == "delta") p.delta = value;
    else if (key == "omega-L") c.omega_L = value;
    else throw ConfigError("not a model parameter: " + key);
}

std::vector<std::pair<std::string, std::string>> serialize(const RunConfig& c) {
    std::vector<std::pair<std::string, std::string>> out;
    std::vector<std::string> gal;
    for (double x : c.gamma_a_list) gal.push_back(format_double(x));
    const auto& p = c.params;
    out = {
        {"g", format_double(p.g)},
        {"gamma-a", format_double(p.gamma_a)},
        {"gamma-sigma", format_double(p.gamma_sigma)},
        {"pump-sigma", format_double(p.P_sigma)},
        {"pump-a", format_double(p.P_a)},
        {"gamma-phi", format_double(p.gamma_phi)},
        {"delta", format_double(p.delta)},
        {"omega-L", format_double(c.omega_L)},
        {"sweep-param", c.sweep.param.empty() ? "none" : c.sweep.param},
        {"sweep-min", format_double(c.sweep.min)},
        {"sweep-max", format_double(c.sweep.max)},
        {"sweep-points", std::to_string(c.sweep.points)},
        {"sweep-scale", c.sweep.log ? "log" : "linear"},
        {"gamma-a-list", join(gal)},
        {"models", join(c.models)},
        {"exact-route", c.exact_route},
        {"channel", to_string(c.spectrum.channel)},
        {"method", c.spectrum.method},
        {"approx-distribution", c.spectrum.distribution},
        {"omega-min", format_double(c.spectrum.omega_min)},
        {"omega-max", format_double(c.spectrum.omega_max)},
        {"points", std::to_string(c.spectrum.points)},
        {"vis-delta-max", format_double(c.visibility.delta_max)},
        {"vis-gamma-phi-max", format_double(c.visibility.gamma_phi_max)},
        {"vis-points", std::to_string(c.visibility.points)},
        {"n-max", std::to_string(c.n_max)},
        {"auto-nmax-cap", std::to_string(c.auto_nmax_cap)},
        {"tol", format_double(c.tol)},
        {"out", c.out},
        {"format", c.format},
        {"threads", std::to_string(c.threads)},
    };
    return out;
}

}  // namespace jcl::cli
