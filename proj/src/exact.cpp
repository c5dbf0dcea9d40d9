// exact.cpp — truncated-Fock Lindblad engine

#include "jcl/exact.hpp"

#include "jcl/errors.hpp"
#include "jcl/statistics.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace jcl::exact {

namespace {

constexpr cd I{0.0, 1.0};

std::int64_t key(int x, int y) { return (static_cast<std::int64_t>(x) << 32) | static_cast<std::uint32_t>(y); }

// Sparse operator stored both by column (op_{w x} for fixed x) and by row (op_{y z} for fixed y).
struct OpLists {
    std::vector<std::vector<std::pair<int, cd>>> col;
    std::vector<std::vector<std::pair<int, cd>>> row;
};

OpLists lists_of(const SparseC& m) {
    OpLists L;
    L.col.resize(m.cols());
    L.row.resize(m.rows());
    for (int k = 0; k < m.outerSize(); ++k) {
        for (SparseC::InnerIterator it(m, k); it; ++it) {
            if (it.value() == cd(0.0)) continue;
            L.col[it.col()].push_back({static_cast<int>(it.row()), it.value()});
            L.row[it.row()].push_back({static_cast<int>(it.col()), it.value()});
        }
    }
    return L;
}

SparseC annihilation(const FockSpace& s) {
    std::vector<Eigen::Triplet<cd>> t;
    for (int n = 1; n <= s.n_max; ++n) {
        for (int i = 0; i < 2; ++i) t.emplace_back(s.index(n - 1, i), s.index(n, i), std::sqrt(double(n)));
    }
    SparseC a(s.dim(), s.dim());
    a.setFromTriplets(t.begin(), t.end());
    return a;
}

SparseC lowering(const FockSpace& s) {
    std::vector<Eigen::Triplet<cd>> t;
    for (int n = 0; n <= s.n_max; ++n) t.emplace_back(s.index(n, 0), s.index(n, 1), 1.0);
    SparseC sm(s.dim(), s.dim());
    sm.setFromTriplets(t.begin(), t.end());
    return sm;
}

struct Dissipator {
    double rate;
    OpLists c;
    OpLists cdc;
};

struct Generator {
    OpLists H;
    std::vector<Dissipator> diss;
};

Generator make_generator(const SystemParams& p, const FockSpace& s) {
    const SparseC a = annihilation(s);
    const SparseC sm = lowering(s);
    const SparseC ad = SparseC(a.adjoint());
    const SparseC sp = SparseC(sm.adjoint());
    const SparseC ns = sp * sm;
    SparseC H = SparseC(ns * cd(-p.delta)) + SparseC((ad * sm + a * sp) * cd(p.g));
    Generator G;
    G.H = lists_of(H);
    auto add = [&](double rate, const SparseC& c) {
        if (rate == 0.0) return;
        const SparseC cd_ = SparseC(c.adjoint());
        G.diss.push_back({rate, lists_of(c), lists_of(SparseC(cd_ * c))});
    };
    add(p.gamma_a, a);
    add(p.gamma_sigma, sm);
    add(p.P_a, ad);
    add(p.P_sigma, sp);
    add(p.gamma_phi, ns);
    return G;
}

// L(|x><y|) emitted as a sum of matrix units |r><c| with coefficients.
template <class Emit>
void apply_unit(const Generator& G, int x, int y, Emit&& emit) {
    for (const auto& [z, h] : G.H.row[y]) emit(x, z, I * h);
    for (const auto& [w, h] : G.H.col[x]) emit(w, y, -I * h);
    for (const auto& d : G.diss) {
        for (const auto& [w, cwx] : d.c.col[x]) {
            for (const auto& [z, czy] : d.c.col[y]) emit(w, z, d.rate * cwx * std::conj(czy));
        }
        for (const auto& [w, v] : d.cdc.col[x]) emit(w, y, -0.5 * d.rate * v);
        for (const auto& [z, v] : d.cdc.row[y]) emit(x, z, -0.5 * d.rate * v);
    }
}

void check_steady_preconditions(const SystemParams& p) {
    p.validate();
    if (p.Gamma_a() < 0.0 || (p.Gamma_a() == 0.0 && p.P_a > 0.0)) {
        throw NoSteadyState("P_a >= gamma_a: the cavity population grows without bound");
    }
    if (p.gamma_a == 0.0 && p.P_sigma >= p.gamma_sigma && p.P_sigma > 0.0) {
        throw NoSteadyState("gamma_a = 0 with P_sigma >= gamma_sigma: the cavity population grows without bound");
    }
}

DensityMatrix solve_with_trace_row(const SparseC& L, const Sector& sec) {
    const int S = sec.size();
    int r0 = -1;
    for (int k = 0; k < S; ++k) {
        if (sec.elements[k].first == sec.elements[k].second) {
            r0 = k;
            break;
        }
    }
    std::vector<Eigen::Triplet<cd>> t;
    t.reserve(static_cast<std::size_t>(L.nonZeros()) + S);
    for (int k = 0; k < L.outerSize(); ++k) {
        for (SparseC::InnerIterator it(L, k); it; ++it) {
            if (it.row() != r0) t.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
        }
    }
    for (int k = 0; k < S; ++k) {
        if (sec.elements[k].first == sec.elements[k].second) t.emplace_back(r0, k, 1.0);
    }
    SparseC A(S, S);
    A.setFromTriplets(t.begin(), t.end());
    A.makeCompressed();
    Eigen::SparseLU<SparseC> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success) throw NoSteadyState("steady state: Liouvillian is singular beyond the trace constraint");
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(S);
    b(r0) = 1.0;
    const Eigen::VectorXcd v = lu.solve(b);
    if (lu.info() != Eigen::Success || !v.allFinite()) throw NoSteadyState("steady state: solve failed");

    DensityMatrix dm;
    dm.space = sec.space;
    dm.rho = Eigen::MatrixXcd::Zero(sec.space.dim(), sec.space.dim());
    for (int k = 0; k < S; ++k) dm.rho(sec.elements[k].first, sec.elements[k].second) = v(k);
    return dm;
}

}  // namespace

Sector Sector::make(const FockSpace& s, int charge) {
    Sector sec;
    sec.space = s;
    sec.charge = charge;
    for (int x = 0; x < s.dim(); ++x) {
        const int e = s.excitations(x) - charge;
        for (int y : {s.index(e - 1, 1), s.index(e, 0)}) {
            if (y < 0 || y >= s.dim() || s.excitations(y) != e) continue;
            sec.lookup[key(x, y)] = sec.size();
            sec.elements.push_back({x, y});
        }
    }
    return sec;
}

Sector Sector::full(const FockSpace& s) {
    Sector sec;
    sec.space = s;
    sec.is_full = true;
    for (int y = 0; y < s.dim(); ++y) {
        for (int x = 0; x < s.dim(); ++x) sec.elements.push_back({x, y});
    }
    return sec;
}

int Sector::find(int x, int y) const {
    if (is_full) return x + space.dim() * y;
    const auto it = lookup.find(key(x, y));
    return it == lookup.end() ? -1 : it->second;
}

SparseC build_liouvillian(const SystemParams& p, const Sector& sector) {
    p.validate();
    const Generator G = make_generator(p, sector.space);
    std::vector<Eigen::Triplet<cd>> t;
    for (int k = 0; k < sector.size(); ++k) {
        const auto [x, y] = sector.elements[k];
        apply_unit(G, x, y, [&](int r, int c, cd v) {
            const int pos = sector.find(r, c);
            if (pos < 0) throw std::logic_error("Liouvillian leaves its excitation sector");
            t.emplace_back(pos, k, v);
        });
    }
    SparseC L(sector.size(), sector.size());
    L.setFromTriplets(t.begin(), t.end());
    L.makeCompressed();
    return L;
}

SparseC build_liouvillian(const SystemParams& p, int n_max) {
    if (n_max < 1) throw std::invalid_argument("build_liouvillian: n_max must be >= 1");
    return build_liouvillian(p, Sector::full(FockSpace{n_max}));
}

double DensityMatrix::p0(int n) const {
    return n <= space.n_max ? rho(space.index(n, 0), space.index(n, 0)).real() : 0.0;
}
double DensityMatrix::p1(int n) const {
    return n <= space.n_max ? rho(space.index(n, 1), space.index(n, 1)).real() : 0.0;
}
cd DensityMatrix::q(int n) const {
    if (n < 1 || n > space.n_max) return 0.0;
    return rho(space.index(n, 0), space.index(n - 1, 1));
}

std::vector<double> DensityMatrix::photon_distribution() const {
    std::vector<double> T(space.n_max + 1);
    for (int n = 0; n <= space.n_max; ++n) T[n] = p0(n) + p1(n);
    return T;
}

double DensityMatrix::n_a() const { return factorial_moment(1); }

double DensityMatrix::n_sigma() const {
    double s = 0.0;
    for (int n = 0; n <= space.n_max; ++n) s += p1(n);
    return s;
}

double DensityMatrix::factorial_moment(int k) const {
    return stats::factorial_moment(photon_distribution(), k);
}

double DensityMatrix::g2() const {
    const double na = n_a();
    return na > 0.0 ? factorial_moment(2) / (na * na) : 0.0;
}

DensityMatrix steady_state_at(const SystemParams& p, int n_max) {
    check_steady_preconditions(p);
    if (n_max < 1) throw std::invalid_argument("steady_state: n_max must be >= 1");
    const Sector sec = Sector::make(FockSpace{n_max}, 0);
    return solve_with_trace_row(build_liouvillian(p, sec), sec);
}

DensityMatrix steady_state_full(const SystemParams& p, int n_max) {
    check_steady_preconditions(p);
    if (n_max < 1) throw std::invalid_argument("steady_state: n_max must be >= 1");
    const Sector sec = Sector::full(FockSpace{n_max});
    return solve_with_trace_row(build_liouvillian(p, sec), sec);
}

int auto_initial_cutoff(const SystemParams& p) {
    double est = 0.0;
    if (p.gamma_a > 0.0) {
        const double Gs = p.Gamma_sigma();
        const double ks = kappa_rates(p).kappa_sigma;
        if (Gs > 0.0) {
            est = Gs / (2.0 * p.gamma_a) * (1.0 - 2.0 * p.gamma_sigma / Gs - (Gs + p.gamma_phi) / ks);
        }
        est = std::min(est, ks / p.gamma_a);
    }
    return std::max(8, static_cast<int>(std::ceil(3.0 * std::max(est, 0.0))) + 10);
}

SteadyResult steady_state(const SystemParams& p, const SteadyOptions& opt) {
    check_steady_preconditions(p);
    auto pack = [](DensityMatrix&& dm) {
        SteadyResult r;
        r.n_max = dm.space.n_max;
        r.n_a = dm.n_a();
        r.n_sigma = dm.n_sigma();
        r.g2 = dm.g2();
        r.state = std::move(dm);
        return r;
    };
    if (opt.n_max > 0) return pack(steady_state_at(p, opt.n_max));

    int n = std::min(auto_initial_cutoff(p), opt.n_max_cap);
    SteadyResult prev = pack(steady_state_at(p, n));
    while (true) {
        const int next = 2 * n;
        if (next > opt.n_max_cap) {
            throw TruncationNotConverged("photon cutoff exceeded cap " + std::to_string(opt.n_max_cap), n);
        }
        SteadyResult cur = pack(steady_state_at(p, next));
        const auto T = cur.state.photon_distribution();
        const bool stable = std::abs(cur.n_a - prev.n_a) <= opt.tol * std::abs(cur.n_a);
        if (stable && T.back() < opt.tail) return cur;
        prev = std::move(cur);
        n = next;
    }
}

StateDiagnostics diagnose(const DensityMatrix& dm) {
    StateDiagnostics d;
    const auto& r = dm.rho;
    d.hermiticity = (r - r.adjoint()).cwiseAbs().maxCoeff();
    d.trace_error = std::abs(r.trace() - cd(1.0));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (r + r.adjoint()), Eigen::EigenvaluesOnly);
    d.min_eigenvalue = es.eigenvalues().minCoeff();
    for (int x = 0; x < r.rows(); ++x) {
        for (int y = 0; y < r.cols(); ++y) {
            if (dm.space.excitations(x) != dm.space.excitations(y)) {
                d.off_pattern = std::max(d.off_pattern, std::abs(r(x, y)));
            }
        }
    }
    return d;
}

namespace {

struct CorrelatorSetup {
    Sector sector;
    SparseC G;
    Eigen::VectorXcd x0;   // rho c^+ restricted to the q = +1 sector
    Eigen::VectorXcd r;    // readout Tr[c X]
    double n_c{0.0};
};

CorrelatorSetup correlator_setup(const SystemParams& p, Channel ch, int n_max) {
    const FockSpace s{n_max};
    const DensityMatrix dm = steady_state_at(p, n_max);
    const SparseC c = ch == Channel::cavity ? annihilation(s) : lowering(s);
    const Eigen::MatrixXcd cdag = Eigen::MatrixXcd(c).adjoint();
    const Eigen::MatrixXcd cm = Eigen::MatrixXcd(c);
    const Eigen::MatrixXcd X = dm.rho * cdag;

    CorrelatorSetup cs;
    cs.sector = Sector::make(s, 1);
    cs.G = build_liouvillian(p, cs.sector);
    const int S = cs.sector.size();
    cs.x0.resize(S);
    cs.r.resize(S);
    for (int k = 0; k < S; ++k) {
        const auto [x, y] = cs.sector.elements[k];
        cs.x0(k) = X(x, y);
        cs.r(k) = cm(y, x);
    }
    cs.n_c = (cs.r.transpose() * cs.x0)(0).real();
    return cs;
}

std::vector<double> resolvent_values(const CorrelatorSetup& cs, const std::vector<double>& omega) {
    const int S = cs.sector.size();
    SparseC Id(S, S);
    Id.setIdentity();
    std::vector<double> out;
    out.reserve(omega.size());
    Eigen::SparseLU<SparseC> lu;
    bool analyzed = false;
    for (double w : omega) {
        SparseC A = cs.G + SparseC(Id * cd(0.0, w));
        A.makeCompressed();
        if (!analyzed) {
            lu.analyzePattern(A);
            analyzed = true;
        }
        lu.factorize(A);
        if (lu.info() != Eigen::Success) throw std::runtime_error("resolvent_spectrum: singular resolvent");
        const Eigen::VectorXcd y = lu.solve(cs.x0);
        const cd val = -(cs.r.transpose() * y)(0);
        out.push_back(val.real() / (std::numbers::pi * cs.n_c));
    }
    return out;
}

// Diagonal similarity A <- D^-1 A D equalizing row and column norms (powers of two, so exact).
Eigen::VectorXd balance(Eigen::MatrixXcd& A) {
    const Eigen::Index n = A.rows();
    Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
    bool done = false;
    for (int sweep = 0; !done && sweep < 200; ++sweep) {
        done = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double c = 0.0, r = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(A(j, i));
                r += std::abs(A(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            const double s = c + r;
            double f = 1.0;
            while (c < r / 2.0) {
                f *= 2.0;
                c *= 4.0;
            }
            while (c >= r * 2.0) {
                f /= 2.0;
                c /= 4.0;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                d(i) *= f;
                A.row(i) /= f;
                A.col(i) *= f;
            }
        }
    }
    return d;
}

int spectral_cutoff(const SystemParams& p, const LineOptions& opt) {
    if (opt.n_max > 0) return opt.n_max;
    const SteadyResult sr = steady_state(p, opt.steady);
    const auto T = sr.state.photon_distribution();
    const int sup = static_cast<int>(stats::support(T, opt.tail));
    return std::clamp(sup + 4, 4, sr.n_max);
}

}  // namespace

LineResult spectral_lines(const SystemParams& p, Channel ch, const LineOptions& opt) {
    const int n_max = spectral_cutoff(p, opt);
    const CorrelatorSetup cs = correlator_setup(p, ch, n_max);
    LineResult out;
    out.n_max = n_max;
    out.n_c = cs.n_c;
    if (!(cs.n_c > 0.0)) throw std::runtime_error("spectral_lines: channel is not populated");

    Eigen::MatrixXcd Gd = Eigen::MatrixXcd(cs.G);
    const Eigen::VectorXd d = balance(Gd);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Gd);
    if (es.info() != Eigen::Success) throw NonDiagonalizable("spectral_lines: eigensolver failed");
    const Eigen::MatrixXcd& V = es.eigenvectors();
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(V);
    const Eigen::VectorXcd w = lu.solve(cs.x0.cwiseQuotient(d.cast<cd>()));
    const Eigen::RowVectorXcd rv = cs.r.cwiseProduct(d.cast<cd>()).transpose() * V;

    std::vector<ExpTerm> terms;
    terms.reserve(static_cast<std::size_t>(V.cols()));
    cd total{0.0, 0.0};
    for (int k = 0; k < V.cols(); ++k) {
        terms.push_back({rv(k) * w(k) / cs.n_c, es.eigenvalues()(k)});
        total += terms.back().coeff;
    }
    // The eigenbasis of the correlator block is far from orthogonal deep in the lasing
    // regime, so check the decomposition against direct resolvent solves.
    if (!(std::abs(total - 1.0) < opt.decomposition_tol)) {
        throw NonDiagonalizable("spectral_lines: eigen-decomposition lost accuracy");
    }
    std::vector<const ExpTerm*> strongest;
    for (const auto& t : terms) strongest.push_back(&t);
    const std::size_t n_probe = std::min<std::size_t>(8, strongest.size());
    std::partial_sort(strongest.begin(), strongest.begin() + n_probe, strongest.end(),
                      [](const ExpTerm* a, const ExpTerm* b) { return std::abs(a->coeff) > std::abs(b->coeff); });
    std::vector<double> probes{0.0};
    for (std::size_t k = 0; k < n_probe; ++k) probes.push_back(-strongest[k]->lambda.imag());
    const std::vector<double> direct = resolvent_values(cs, probes);
    double scale = 0.0, err = 0.0;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        cd v{0.0, 0.0};
        for (const auto& t : terms) v -= t.coeff / (cd(0.0, probes[i]) + t.lambda);
        scale = std::max(scale, std::abs(direct[i]));
        err = std::max(err, std::abs(v.real() / std::numbers::pi - direct[i]));
    }
    if (!(err <= opt.decomposition_tol * scale)) {
        throw NonDiagonalizable("spectral_lines: eigen-decomposition lost accuracy");
    }
    out.lines = lines_from_terms(terms);
    return out;
}

std::vector<double> resolvent_spectrum(const SystemParams& p, Channel ch,
                                       const std::vector<double>& omega, int n_max) {
    return resolvent_values(correlator_setup(p, ch, n_max), omega);
}

SpectrumResult spectrum(const SystemParams& p, Channel ch, const std::vector<double>& omega,
                        const LineOptions& opt) {
    SpectrumResult res;
    res.channel = ch;
    res.omega = omega;
    try {
        LineResult lr = spectral_lines(p, ch, opt);
        res.n_c = lr.n_c;
        std::vector<SpectralLine> broad;
        for (const auto& l : lr.lines) {
            if (l.gamma_p < p.gamma_a / 10.0) {
                res.elastic_weight += l.L_p;
            } else {
                broad.push_back(l);
            }
        }
        res.values = evaluate_lines(broad, omega);
        res.lines = std::move(lr.lines);
    } catch (const NonDiagonalizable&) {
        const CorrelatorSetup cs = correlator_setup(p, ch, spectral_cutoff(p, opt));
        res.values = resolvent_values(cs, omega);
        res.n_c = cs.n_c;
        res.elastic_weight = 0.0;
        res.lines.clear();
    }
    return res;
}

TransitionMap transition_map(const SystemParams& p, const std::vector<double>& pumps,
                             const LineOptions& opt) {
    if (!std::is_sorted(pumps.begin(), pumps.end())) {
        throw std::invalid_argument("transition_map: pump grid must be sorted");
    }
    TransitionMap map;
    for (double P : pumps) {
        SystemParams q = p;
        q.P_sigma = P;
        try {
            const LineResult lr = spectral_lines(q, Channel::cavity, opt);
            for (const auto& l : lr.lines) map.rows.push_back({P, l.omega_p, l.L_p, l.gamma_p, l.K_p});
        } catch (const std::exception& e) {
            map.failures.push_back({P, e.what()});
        }
    }
    return map;
}

}  // namespace jcl::exact
