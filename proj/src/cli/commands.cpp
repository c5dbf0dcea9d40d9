// commands.cpp — steady, sweep, spectrum, transitions, mollow-coherent and regimes

#include "jcl/cli/commands.hpp"

#include "jcl/approximations.hpp"
#include "jcl/coherent_mollow.hpp"
#include "jcl/errors.hpp"
#include "jcl/exact.hpp"
#include "jcl/moments.hpp"
#include "jcl/spectra_approx.hpp"
#include "jcl/statistics.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace jcl::cli {

namespace {

bool wants(const RunConfig& c, const std::string& model) {
    return std::find(c.models.begin(), c.models.end(), model) != c.models.end();
}

std::vector<Cell> param_cells(const SystemParams& p) {
    return {p.gamma_a, p.gamma_sigma, p.P_sigma, p.P_a, p.gamma_phi, p.delta};
}

const std::vector<std::string> kParamColumns{"gamma_a", "gamma_sigma", "P_sigma", "P_a", "gamma_phi", "delta"};

exact::SteadyOptions steady_options(const RunConfig& c) {
    exact::SteadyOptions o;
    o.n_max = c.n_max;
    o.n_max_cap = c.auto_nmax_cap;
    o.tol = c.tol;
    return o;
}

exact::LineOptions line_options(const RunConfig& c) {
    exact::LineOptions o;
    o.n_max = c.n_max;
    o.steady = steady_options(c);
    return o;
}

std::string fmt_point(const SystemParams& p) {
    return "gamma_a=" + format_double(p.gamma_a) + " P_sigma=" + format_double(p.P_sigma);
}

nlohmann::json lines_json(const std::vector<SpectralLine>& lines) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& l : lines) a.push_back({{"omega_p", l.omega_p}, {"gamma_p", l.gamma_p}, {"L_p", l.L_p}, {"K_p", l.K_p}});
    return a;
}

nlohmann::json finite_or_text(double x) {
    if (std::isfinite(x)) return x;
    return format_double(x);
}

struct SteadyRow {
    std::vector<Cell> cells;
    bool failed{false};
};

SteadyRow steady_row(const RunConfig& c, const SystemParams& p) {
    SteadyRow r;
    std::vector<std::string> errors;
    auto guard = [&](const std::string& model, auto&& body) {
        if (!wants(c, model)) return;
        try {
            body();
        } catch (const std::exception& e) {
            errors.push_back(model + ": " + e.what());
        }
    };

    Cell regime, n_max;
    Cell ex_na, ex_ns, ex_g2, ex_q;
    Cell bo_na, bo_ns, tj_na, tj_ns;
    Cell sc_na, sc_ns, th_na, th_ns;
    Cell co_na, co_ns, co_nc, co_g2, co_q;

    try {
        regime = approx::to_string(approx::classify_regime(p).regime);
    } catch (const std::exception& e) {
        errors.push_back(std::string("regime: ") + e.what());
    }
    guard("exact", [&] {
        bool use_moments = c.exact_route == "moments" && p.P_a == 0.0;
        if (use_moments) {
            MomentOptions mo;
            mo.n_max = c.n_max;
            mo.n_max_cap = std::max(c.auto_nmax_cap, 2);
            try {
                const PhotonMoments m = solve_moments(p, mo);
                const Observables o = observables_from_moments(p, m);
                n_max = static_cast<long long>(m.n_max);
                ex_na = o.n_a;
                ex_ns = o.n_sigma;
                ex_g2 = o.g2;
                ex_q = o.mandel_Q;
            } catch (const PrecisionLoss&) {
                use_moments = false;
            }
        }
        if (!use_moments) {
            const exact::SteadyResult s = exact::steady_state(p, steady_options(c));
            n_max = static_cast<long long>(s.n_max);
            ex_na = s.n_a;
            ex_ns = s.n_sigma;
            ex_g2 = s.n_a > 0.0 ? s.g2 : 0.0;
            ex_q = s.n_a > 0.0 ? s.n_a * (s.g2 - 1.0) : 0.0;
        }
    });
    guard("bosonic", [&] {
        const auto lm = approx::linear_models(p);
        bo_na = lm.bosonic.n_a;
        bo_ns = lm.bosonic.n_sigma;
    });
    guard("truncated_jc", [&] {
        const auto lm = approx::linear_models(p);
        tj_na = lm.truncated_jc.n_a;
        tj_ns = lm.truncated_jc.n_sigma;
    });
    guard("semiclassical", [&] {
        const auto s = approx::semiclassical(p);
        sc_na = s.n_a;
        sc_ns = s.n_sigma;
    });
    guard("thermal", [&] {
        const auto t = approx::thermal_na(p);
        th_na = t.n_a;
        th_ns = t.n_sigma;
    });
    guard("cothermal", [&] {
        const auto s = approx::cothermal(p);
        co_na = s.n_a;
        co_ns = s.n_sigma;
        co_nc = s.n_coh;
        co_g2 = s.g2;
        co_q = s.mandel_Q;
    });

    std::string err;
    for (std::size_t i = 0; i < errors.size(); ++i) err += (i ? "; " : "") + errors[i];
    r.failed = !errors.empty();
    r.cells = param_cells(p);
    for (Cell x : {regime, n_max, ex_na, ex_ns, ex_g2, ex_q, bo_na, bo_ns, tj_na, tj_ns, sc_na, sc_ns,
                   th_na, th_ns, co_na, co_ns, co_nc, co_g2, co_q}) {
        r.cells.push_back(std::move(x));
    }
    r.cells.push_back(err);
    return r;
}

int table_exit(const TableResult& t) {
    if (t.failed == 0) return kOk;
    return t.failed == t.points ? kSolverError : kPartial;
}

std::vector<double> spectrum_grid(const RunConfig& c) {
    return linspace(c.spectrum.omega_min, c.spectrum.omega_max, c.spectrum.points);
}

}  // namespace

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& f) {
    std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                      : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex m;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard lock(m);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::vector<SystemParams> sweep_points(const RunConfig& c) {
    std::vector<double> family = c.gamma_a_list;
    if (family.empty()) family.push_back(c.params.gamma_a);
    std::vector<SystemParams> pts;
    for (double ga : family) {
        RunConfig base = c;
        base.params.gamma_a = ga;
        if (c.sweep.param.empty()) {
            pts.push_back(base.params);
            continue;
        }
        for (double x : c.sweep.grid()) {
            RunConfig q = base;
            set_param(q, c.sweep.param, x);
            pts.push_back(q.params);
        }
    }
    return pts;
}

TableResult steady_table(const RunConfig& c) {
    const auto pts = sweep_points(c);
    std::vector<SteadyRow> rows(pts.size());
    parallel_for(pts.size(), c.threads, [&](std::size_t i) { rows[i] = steady_row(c, pts[i]); });

    TableResult out;
    out.points = pts.size();
    out.table.columns = kParamColumns;
    for (const char* col : {"regime", "n_max", "exact_n_a", "exact_n_sigma", "exact_g2", "exact_Q",
                            "bosonic_n_a", "bosonic_n_sigma", "truncated_jc_n_a", "truncated_jc_n_sigma",
                            "semiclassical_n_a", "semiclassical_n_sigma", "thermal_n_a", "thermal_n_sigma",
                            "cothermal_n_a", "cothermal_n_sigma", "cothermal_n_coh", "cothermal_g2",
                            "cothermal_Q", "error"}) {
        out.table.columns.push_back(col);
    }
    for (auto& r : rows) {
        if (r.failed) ++out.failed;
        out.table.add_row(std::move(r.cells));
    }
    return out;
}

TableResult regimes_table(const RunConfig& c) {
    const auto pts = sweep_points(c);
    std::vector<std::vector<Cell>> rows(pts.size());
    std::vector<std::string> thresholds(pts.size());
    std::vector<char> failed(pts.size(), 0);
    parallel_for(pts.size(), c.threads, [&](std::size_t i) {
        auto cells = param_cells(pts[i]);
        try {
            const auto r = approx::classify_regime(pts[i]);
            thresholds[i] = r.thresholds;
            for (Cell x : {Cell{approx::to_string(r.regime)}, Cell{r.linear_edge}, Cell{r.quantum_edge},
                           Cell{r.lasing_edge}, Cell{r.quench_edge},
                           Cell{static_cast<long long>(r.spectrum_window)},
                           Cell{approx::lasing_midpoint(pts[i])}, Cell{std::string{}}}) {
                cells.push_back(std::move(x));
            }
        } catch (const std::exception& e) {
            failed[i] = 1;
            for (int k = 0; k < 7; ++k) cells.emplace_back();
            cells.emplace_back(std::string(e.what()));
        }
        rows[i] = std::move(cells);
    });
    TableResult out;
    out.points = pts.size();
    out.table.columns = kParamColumns;
    for (const char* col : {"regime", "linear_edge", "quantum_edge", "lasing_edge", "quench_edge",
                            "spectrum_window", "lasing_midpoint", "error"}) {
        out.table.columns.push_back(col);
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.failed += failed[i];
        out.table.add_row(std::move(rows[i]));
    }
    if (!thresholds.empty() && !thresholds.front().empty()) out.table.comments.push_back("rule: " + thresholds.front());
    return out;
}

TableResult transitions_table(const RunConfig& c) {
    const auto pts = sweep_points(c);
    std::vector<std::vector<std::vector<Cell>>> rows(pts.size());
    std::vector<std::string> failures(pts.size());
    const exact::LineOptions opt = line_options(c);
    parallel_for(pts.size(), c.threads, [&](std::size_t i) {
        try {
            const exact::LineResult lr = exact::spectral_lines(pts[i], Channel::cavity, opt);
            for (const auto& l : lr.lines) {
                rows[i].push_back({pts[i].gamma_a, pts[i].P_sigma, l.omega_p, l.L_p, l.gamma_p, l.K_p});
            }
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    });
    TableResult out;
    out.points = pts.size();
    out.table.columns = {"gamma_a", "P_sigma", "omega_p", "L_p", "gamma_p", "K_p"};
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!failures[i].empty()) {
            ++out.failed;
            const std::string msg = "failed " + fmt_point(pts[i]) + ": " + failures[i];
            out.table.comments.push_back(msg);
            std::cerr << "jcl_run transitions: " << msg << "\n";
        }
        for (auto& r : rows[i]) out.table.add_row(std::move(r));
    }
    return out;
}

SpectrumOutput spectrum_output(const RunConfig& c) {
    const SystemParams& p = c.params;
    const Channel ch = c.spectrum.channel;
    const auto grid = spectrum_grid(c);
    SpectrumOutput out;
    nlohmann::json& j = out.sidecar;
    j["method"] = c.spectrum.method;
    j["channel"] = to_string(ch);

    SpectrumResult res;
    if (c.spectrum.method == "exact") {
        res = exact::spectrum(p, ch, grid, line_options(c));
        j["lines_available"] = !res.lines.empty();
        j["elastic_rule"] = "sum of L_p over lines with gamma_p < gamma_a/10";
    } else if (c.spectrum.method == "approx") {
        std::vector<double> T;
        if (c.spectrum.distribution == "exact") {
            T = exact::steady_state(p, steady_options(c)).state.photon_distribution();
        } else if (c.spectrum.distribution == "poisson") {
            T = stats::poisson(approx::semiclassical(p).n_a);
        } else {
            T = approx::cothermal(p).distribution();
        }
        res = sa::approx_spectrum(p, T, ch, grid);
        const auto slices = sa::density_slices(p, T);
        j["distribution"] = c.spectrum.distribution;
        j["valid_good_cavity"] = slices.in_validity;
        j["norm_residual"] = slices.norm_residual;
    } else {
        const auto sm = sa::semiclassical_mollow(p, grid, ch);
        res = sm.spectrum;
        j["closed_form"] = sm.closed_form;
        j["R_O"] = {sm.R_O.real(), sm.R_O.imag()};
        j["side_width"] = sm.side_width;
        j["central_width"] = sm.central_width;
        j["gamma_L"] = finite_or_text(sm.gamma_L);
    }
    const auto regime = approx::classify_regime(p);
    j["regime"] = approx::to_string(regime.regime);
    j["spectrum_window"] = regime.spectrum_window;
    j["elastic_weight"] = finite_or_text(res.elastic_weight);
    j["n_c"] = res.n_c;
    j["lines"] = lines_json(res.lines);
    j["line_weight_sum"] = sum_weights(res.lines);
    if (ch == Channel::emitter) {
        try {
            const auto o = sa::observed_splitting(res);
            j["observed_splitting"] = {{"peak", o.peak_position}, {"neck", o.neck_position}, {"resolvable", o.resolvable}};
        } catch (const NotResolvable&) {
            j["observed_splitting"] = nullptr;
        }
    }

    out.table.columns = {"omega", "S"};
    for (std::size_t i = 0; i < grid.size(); ++i) out.table.add_row({grid[i], res.values[i]});
    out.table.comments.push_back("delta peak weight (not rasterized): " + format_double(res.elastic_weight));
    return out;
}

MollowOutput mollow_output(const RunConfig& c) {
    const LaserDriveParams d = c.drive();
    const auto grid = spectrum_grid(c);
    MollowOutput out;
    const auto lines = coherent::coherent_correlator_lines(d);
    std::vector<double> values;
    double L_coh = lines.L_coh;
    if (d.delta == 0.0) {
        auto rs = coherent::mollow_spectrum_resonant(d, grid);
        values = std::move(rs.values);
        L_coh = rs.L_coh;
    } else {
        values = evaluate_lines(lines.lines, grid);
    }
    const auto ss = coherent::coherent_steady_state(d);
    const auto vis = coherent::asymmetry_visibility(d);
    nlohmann::json& j = out.sidecar;
    j["L_coh"] = L_coh;
    j["n_sigma"] = ss.n_sigma;
    j["R_L"] = {lines.R_L.real(), lines.R_L.imag()};
    j["lines"] = lines_json(lines.lines);
    j["visibility"] = vis.defined ? nlohmann::json(vis.V) : nlohmann::json(nullptr);

    out.spectrum.columns = {"omega", "S_incoherent"};
    for (std::size_t i = 0; i < grid.size(); ++i) out.spectrum.add_row({grid[i], values[i]});
    out.spectrum.comments.push_back("elastic weight L_coh (not rasterized): " + format_double(L_coh));

    const auto deltas = linspace(0.0, c.visibility.delta_max, c.visibility.points);
    const auto phis = linspace(0.0, c.visibility.gamma_phi_max, c.visibility.points);
    std::vector<std::vector<Cell>> rows(deltas.size() * phis.size());
    parallel_for(rows.size(), c.threads, [&](std::size_t k) {
        LaserDriveParams q = d;
        q.delta = deltas[k / phis.size()];
        q.gamma_phi = phis[k % phis.size()];
        const auto v = coherent::asymmetry_visibility(q);
        rows[k] = {q.delta, q.gamma_phi, v.defined ? Cell{v.V} : Cell{}, static_cast<long long>(v.defined)};
    });
    out.visibility.columns = {"delta", "gamma_phi", "V", "defined"};
    for (auto& r : rows) out.visibility.add_row(std::move(r));
    return out;
}

int run_command(const RunConfig& c) {
    if (c.command == "steady" || c.command == "sweep") {
        const auto t = steady_table(c);
        emit_table(t.table, c);
        return table_exit(t);
    }
    if (c.command == "regimes") {
        const auto t = regimes_table(c);
        emit_table(t.table, c);
        return table_exit(t);
    }
    if (c.command == "transitions") {
        const auto t = transitions_table(c);
        emit_table(t.table, c);
        return table_exit(t);
    }
    if (c.command == "spectrum") {
        const auto s = spectrum_output(c);
        if (c.format == "json") {
            emit_table(s.table, c, s.sidecar);
        } else {
            emit_table(s.table, c);
            nlohmann::json side = s.sidecar;
            side["units"] = "g=1";
            side["config"] = config_json(c);
            if (c.out != "-") write_text_file(sidecar_path(c.out, ".json"), side.dump(2) + "\n");
        }
        return kOk;
    }
    if (c.command == "mollow-coherent") {
        const auto m = mollow_output(c);
        if (c.format == "json") {
            nlohmann::json extra = m.sidecar;
            extra["visibility_map"] = table_json(m.visibility);
            emit_table(m.spectrum, c, extra);
        } else {
            emit_table(m.spectrum, c);
            if (c.out != "-") {
                nlohmann::json side = m.sidecar;
                side["units"] = "g=1";
                side["config"] = config_json(c);
                write_text_file(sidecar_path(c.out, ".json"), side.dump(2) + "\n");
                std::ostringstream os;
                write_csv(os, m.visibility, c);
                write_text_file(sidecar_path(c.out, ".visibility.csv"), os.str());
            }
        }
        return kOk;
    }
    throw ConfigError("unknown command '" + c.command + "'");
}

int run(int argc, char** argv) {
    CLI::App app{"jcl_run: steady states, spectra and regime maps of the one-atom laser"};
    std::string command;
    std::string config_path;
    app.add_option("command", command, "steady | sweep | spectrum | transitions | mollow-coherent | regimes")
        ->required();
    app.add_option("--config", config_path, "key = value config file (an earlier output also works)");
    KeyValues given;
    for (const auto& k : config_keys()) app.add_option("--" + k.key, given[k.key], k.help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    KeyValues overrides;
    for (const auto& k : config_keys()) {
        if (app.count("--" + k.key) > 0) overrides[k.key] = given[k.key];
    }
    RunConfig cfg;
    try {
        const KeyValues file = config_path.empty() ? KeyValues{} : read_config_file(config_path, command);
        cfg = build_config(command, file, overrides);
    } catch (const ConfigError& e) {
        std::cerr << "jcl_run: config error: " << e.what() << "\n";
        return kConfigError;
    }
    try {
        return run_command(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "jcl_run: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "jcl_run: solver error: " << e.what() << "\n";
        return kSolverError;
    }
}

}  // namespace jcl::cli
