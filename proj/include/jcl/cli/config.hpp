// config.hpp — run configuration for jcl_run: key = value files plus --key value overrides

#pragma once

#include "jcl/model.hpp"
#include "jcl/spectral.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace jcl::cli {

struct SweepSpec {
    std::string param;   // empty: single point
    double min{1e-4};
    double max{1e3};
    int points{200};
    bool log{true};

    std::vector<double> grid() const;
};

struct SpectrumSpec {
    Channel channel{Channel::emitter};
    std::string method{"exact"};        // exact, approx, semiclassical
    std::string distribution{"exact"};  // photon distribution fed to the approx method
    double omega_min{-10.0};
    double omega_max{10.0};
    int points{2001};
};

struct VisibilitySpec {
    double delta_max{3.0};
    double gamma_phi_max{3.0};
    int points{31};
};

struct RunConfig {
    std::string command;
    SystemParams params;
    double omega_L{1.5};
    SweepSpec sweep;
    std::vector<double> gamma_a_list;    // family of sweeps, one per gamma_a
    std::vector<std::string> models;     // steady: subset of kSteadyModels
    std::string exact_route{"moments"};  // moments, liouvillian
    SpectrumSpec spectrum;
    VisibilitySpec visibility;
    int n_max{0};
    int auto_nmax_cap{2048};
    double tol{1e-7};
    std::string out{"-"};
    std::string format{"csv"};
    int threads{0};

    LaserDriveParams drive() const;
};

inline const std::vector<std::string> kCommands{"steady", "sweep", "spectrum", "transitions",
                                                "mollow-coherent", "regimes"};
inline const std::vector<std::string> kSteadyModels{"exact", "bosonic", "truncated_jc",
                                                    "semiclassical", "thermal", "cothermal"};

using KeyValues = std::map<std::string, std::string>;

struct KeyInfo {
    std::string key;
    std::string help;
};
const std::vector<KeyInfo>& config_keys();

// Lines "key = value", "# comment" and "[section]". Keys under a section other than
// [common] only apply when the section names the command. Lines starting with "#!" are
// metadata written by jcl_run; when present, only those are read, so an output file can
// be fed back as a config.
KeyValues parse_config_text(const std::string& text, const std::string& command);
KeyValues read_config_file(const std::string& path, const std::string& command);

// Command defaults, then file values, then overrides. Throws ConfigError.
RunConfig build_config(const std::string& command, const KeyValues& file, const KeyValues& overrides);

// Every key with its effective value, in config_keys() order.
std::vector<std::pair<std::string, std::string>> serialize(const RunConfig& c);

std::string format_double(double x);

void set_param(RunConfig& c, const std::string& key, double value);

}  // namespace jcl::cli
