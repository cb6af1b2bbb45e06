#include "iset/rydberg.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <fstream>
#include <map>
#include <thread>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "iset/errors.hpp"
#include "iset/oracle.hpp"
#include "iset/postprocess.hpp"
#include "iset/rng.hpp"

namespace iset::rydberg {

using kernels::cplx;
using nlohmann::json;

const char* to_string(Mode m) { return m == Mode::physical ? "physical" : "hard_blockade"; }

Mode mode_from_string(const std::string& s) {
    if (s == "physical") return Mode::physical;
    if (s == "hard_blockade") return Mode::hard_blockade;
    throw InputError("unknown simulation mode: " + s);
}

double PiecewiseLinear::operator()(double t) const {
    if (times.empty()) return 0.0;
    if (t <= times.front()) return values.front();
    if (t >= times.back()) return values.back();
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t i = static_cast<std::size_t>(it - times.begin());
    double t0 = times[i - 1], t1 = times[i];
    double f = (t - t0) / (t1 - t0);
    return values[i - 1] * (1.0 - f) + values[i] * f;
}

double PiecewiseLinear::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

PiecewiseLinear PiecewiseLinear::constant(double duration, double value) {
    return PiecewiseLinear{{0.0, duration}, {value, value}};
}

void PulseSchedule::validate(int n_atoms) const {
    if (!(duration > 0.0)) throw InputError("schedule duration must be positive");
    auto check_pwl = [&](const PiecewiseLinear& p, const char* name, bool nonneg) {
        if (p.times.size() != p.values.size() || p.times.size() < 2)
            throw InputError(std::string(name) + ": breakpoint arrays malformed");
        if (p.times.front() != 0.0 || p.times.back() != duration)
            throw InputError(std::string(name) + ": breakpoints must run from 0 to the duration");
        for (std::size_t i = 1; i < p.times.size(); ++i)
            if (!(p.times[i] > p.times[i - 1]))
                throw InputError(std::string(name) + ": breakpoints must strictly increase");
        for (double v : p.values) {
            if (!std::isfinite(v)) throw InputError(std::string(name) + ": non-finite value");
            if (nonneg && v < 0.0) throw InputError(std::string(name) + ": must be nonnegative");
        }
    };
    check_pwl(omega, "omega", true);
    check_pwl(delta, "delta", false);
    check_pwl(phase, "phase", false);
    if (!local_delta.empty() && static_cast<int>(local_delta.size()) != n_atoms)
        throw InputError("local_delta length mismatch");
    for (double v : local_delta)
        if (!std::isfinite(v)) throw InputError("local_delta: non-finite value");
}

double QuantumState::norm() const {
    return std::sqrt(kernels::active().norm_sq(amplitudes.data(), amplitudes.size()));
}

double blockade_radius(double c6, double delta) {
    if (!(c6 > 0.0) || !(delta > 0.0))
        throw InputError("blockade_radius requires positive C6 and detuning");
    return std::pow(c6 / delta, 1.0 / 6.0);
}

CompiledRun compile_register(const Graph& g, const SweepParams& params) {
    if (g.kind() != GraphKind::unitdisk)
        throw InputError("compile_register requires a unit-disk graph");
    if (!(params.duration > 0.0) || !(params.omega_max >= 0.0) || !(params.delta_final > 0.0) ||
        !(params.delta_start >= 0.0))
        throw InputError("invalid sweep parameters");
    double w_max = 0.0, w_min = 0.0;
    for (double w : g.weights()) {
        if (!(w > 0.0)) throw InputError("compile_register requires positive weights");
        w_max = std::max(w_max, w);
        w_min = (w_min == 0.0) ? w : std::min(w_min, w);
    }

    CompiledRun run;
    double r = *g.radius();
    for (const auto& c : g.coords()) run.reg.positions.push_back(Vec2{c.x / r, c.y / r});
    run.reg.length_scale = r;
    run.reg.blockade_radius = 1.0;
    run.reg.weights = g.weights();
    // Blockade radius at the weakest final detuning equals the disk radius,
    // so every edge is blockaded at the end of the sweep.
    double delta_final_min = params.delta_final * (g.n() > 0 ? w_min / w_max : 1.0);
    run.reg.c6 = delta_final_min; // (c6 / delta_final_min)^(1/6) = 1

    const double t = params.duration;
    run.schedule.duration = t;
    run.schedule.omega = PiecewiseLinear{{0.0, 0.1 * t, 0.9 * t, t},
                                         {0.0, params.omega_max, params.omega_max, 0.0}};
    run.schedule.delta =
        PiecewiseLinear{{0.0, t}, {-params.delta_start, params.delta_final}};
    run.schedule.phase = PiecewiseLinear::constant(t, 0.0);
    for (double w : g.weights())
        run.schedule.local_delta.push_back(params.delta_final * (w / w_max - 1.0));
    run.schedule.validate(g.n());
    return run;
}

namespace {

// Basis-resolved Hamiltonian data. The diagonal splits into a part
// proportional to the global detuning (excitation count) and a static part
// (local detuning offsets plus pair interactions).
struct Hamiltonian {
    QuantumState::Basis basis = QuantumState::Basis::full;
    int n = 0;
    std::size_t dim = 0;
    std::vector<std::uint64_t> states;              // blockaded only
    std::vector<double> excount;
    std::vector<double> static_diag;
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> drive_pairs; // blockaded
    double max_pair_v = 0.0;
    mutable std::vector<double> dbuf;

    void apply(double omega, double delta, double phi, const cplx* x, cplx* y) const {
        const auto& k = kernels::active();
        std::fill_n(y, dim, cplx{0.0, 0.0});
        k.scale_add(dbuf.data(), excount.data(), static_diag.data(), -delta, dim);
        k.diag_mul_add(y, x, dbuf.data(), dim);
        if (omega == 0.0) return;
        cplx amp = 0.5 * omega * cplx{std::cos(phi), std::sin(phi)};
        cplx amp_c = std::conj(amp);
        if (basis == QuantumState::Basis::full) {
            for (int j = 0; j < n; ++j) {
                std::size_t bit = 1ull << j;
                for (std::size_t base = 0; base < dim; base += 2 * bit) {
                    k.caxpy(y + base, x + base + bit, amp, bit);
                    k.caxpy(y + base + bit, x + base, amp_c, bit);
                }
            }
        } else {
            for (int j = 0; j < n; ++j) {
                for (auto [lo, hi] : drive_pairs[static_cast<std::size_t>(j)]) {
                    y[lo] += amp * x[hi];
                    y[hi] += amp_c * x[lo];
                }
            }
        }
    }
};

std::vector<std::uint64_t> adjacency_masks(const AtomRegister& reg) {
    int n = reg.n();
    std::vector<std::uint64_t> adj(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (distance(reg.positions[static_cast<std::size_t>(i)],
                         reg.positions[static_cast<std::size_t>(j)]) <= reg.blockade_radius) {
                adj[static_cast<std::size_t>(i)] |= 1ull << j;
                adj[static_cast<std::size_t>(j)] |= 1ull << i;
            }
    return adj;
}

void enum_is_masks(const std::vector<std::uint64_t>& adj, int v, std::uint64_t cur,
                   std::size_t limit, std::vector<std::uint64_t>& out) {
    if (v < 0) {
        if (out.size() >= limit)
            throw SizeCapError("blockaded basis exceeds the configured dimension cap");
        out.push_back(cur);
        return;
    }
    enum_is_masks(adj, v - 1, cur, limit, out);
    if ((adj[static_cast<std::size_t>(v)] & cur) == 0)
        enum_is_masks(adj, v - 1, cur | (1ull << v), limit, out);
}

Hamiltonian build_hamiltonian(const AtomRegister& reg, const EvolveConfig& cfg) {
    int n = reg.n();
    if (n < 1) throw InputError("register needs at least one atom");
    if (n > 63) throw SizeCapError("register exceeds 63 atoms");
    for (std::size_t i = 0; i < reg.positions.size(); ++i)
        for (std::size_t j = i + 1; j < reg.positions.size(); ++j)
            if (distance(reg.positions[i], reg.positions[j]) == 0.0)
                throw InputError("atom positions must be distinct");

    Hamiltonian ham;
    ham.n = n;
    if (cfg.mode == Mode::physical) {
        if (n > cfg.max_full_atoms)
            throw SizeCapError("physical mode limited to " + std::to_string(cfg.max_full_atoms) +
                               " atoms");
        ham.basis = QuantumState::Basis::full;
        ham.dim = 1ull << n;
        // pairwise 1/R^6 with a cutoff where the tail is negligible
        double cutoff = cfg.interaction_cutoff * reg.blockade_radius;
        std::vector<double> vpair;
        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                double d = distance(reg.positions[static_cast<std::size_t>(i)],
                                    reg.positions[static_cast<std::size_t>(j)]);
                if (d <= cutoff) {
                    double v = reg.c6 / std::pow(d, 6.0);
                    pairs.emplace_back(i, j);
                    vpair.push_back(v);
                    ham.max_pair_v = std::max(ham.max_pair_v, v);
                }
            }
        ham.excount.resize(ham.dim);
        ham.static_diag.assign(ham.dim, 0.0);
        for (std::size_t m = 0; m < ham.dim; ++m)
            ham.excount[m] = static_cast<double>(std::popcount(m));
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            std::uint64_t pm = (1ull << pairs[p].first) | (1ull << pairs[p].second);
            for (std::size_t m = 0; m < ham.dim; ++m)
                if ((m & pm) == pm) ham.static_diag[m] += vpair[p];
        }
    } else {
        ham.basis = QuantumState::Basis::blockaded;
        auto adj = adjacency_masks(reg);
        enum_is_masks(adj, n - 1, 0, cfg.max_blockaded_dim, ham.states);
        ham.dim = ham.states.size();
        ham.excount.resize(ham.dim);
        ham.static_diag.assign(ham.dim, 0.0);
        for (std::size_t i = 0; i < ham.dim; ++i)
            ham.excount[i] = static_cast<double>(std::popcount(ham.states[i]));
        ham.drive_pairs.resize(static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < ham.dim; ++i) {
            std::uint64_t m = ham.states[i];
            for (int j = 0; j < n; ++j) {
                if (m & (1ull << j)) continue;
                if (adj[static_cast<std::size_t>(j)] & m) continue; // would leave the subspace
                std::uint64_t target = m | (1ull << j);
                auto it = std::lower_bound(ham.states.begin(), ham.states.end(), target);
                internal_check(it != ham.states.end() && *it == target,
                               "blockaded basis is missing a reachable state");
                ham.drive_pairs[static_cast<std::size_t>(j)].emplace_back(
                    static_cast<std::uint32_t>(i),
                    static_cast<std::uint32_t>(it - ham.states.begin()));
            }
        }
    }
    ham.dbuf.resize(ham.dim);
    return ham;
}

void add_local_delta(Hamiltonian& ham, const std::vector<double>& local_delta) {
    if (local_delta.empty()) return;
    // static diagonal gains -sum_j delta_j n_j
    if (ham.basis == QuantumState::Basis::full) {
        for (std::size_t m = 0; m < ham.dim; ++m) {
            double s = 0.0;
            std::uint64_t bits = m;
            while (bits) {
                int j = std::countr_zero(bits);
                bits &= bits - 1;
                s += local_delta[static_cast<std::size_t>(j)];
            }
            ham.static_diag[m] -= s;
        }
    } else {
        for (std::size_t i = 0; i < ham.dim; ++i) {
            double s = 0.0;
            std::uint64_t bits = ham.states[i];
            while (bits) {
                int j = std::countr_zero(bits);
                bits &= bits - 1;
                s += local_delta[static_cast<std::size_t>(j)];
            }
            ham.static_diag[i] -= s;
        }
    }
}

// exp(-i h T) e1 for the real symmetric tridiagonal Lanczos matrix.
Eigen::VectorXcd tridiag_exp_e1(const std::vector<double>& alpha, const std::vector<double>& beta,
                                double h) {
    const int m = static_cast<int>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        t(i, i) = alpha[static_cast<std::size_t>(i)];
        if (i + 1 < m) {
            t(i, i + 1) = beta[static_cast<std::size_t>(i)];
            t(i + 1, i) = beta[static_cast<std::size_t>(i)];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const auto& vecs = es.eigenvectors();
    const auto& vals = es.eigenvalues();
    Eigen::VectorXcd coeff = Eigen::VectorXcd::Zero(m);
    for (int l = 0; l < m; ++l) {
        cplx phasef{std::cos(-h * vals(l)), std::sin(-h * vals(l))};
        for (int j = 0; j < m; ++j) coeff(j) += vecs(j, l) * phasef * vecs(0, l);
    }
    return coeff;
}

struct Propagator {
    const Hamiltonian& ham;
    double tol;
    int mmax = 48;

    // v <- exp(-i h H(omega, delta, phi)) v  via a Lanczos subspace.
    void step(std::vector<cplx>& v, double h, double omega, double delta, double phi,
              int depth = 0) {
        const auto& k = kernels::active();
        const std::size_t dim = ham.dim;
        double beta0 = std::sqrt(k.norm_sq(v.data(), dim));
        internal_check(beta0 > 0.0, "propagator fed a zero state");

        std::vector<std::vector<cplx>> q;
        q.emplace_back(v);
        k.cscale(q[0].data(), cplx{1.0 / beta0, 0.0}, dim);

        std::vector<double> alpha, beta; // beta[k] couples q[k] and q[k+1]
        std::vector<cplx> w(dim);
        Eigen::VectorXcd coeff;
        bool converged = false;

        for (int it = 0; it < mmax; ++it) {
            ham.apply(omega, delta, phi, q[static_cast<std::size_t>(it)].data(), w.data());
            if (it > 0)
                k.caxpy(w.data(), q[static_cast<std::size_t>(it - 1)].data(),
                        cplx{-beta[static_cast<std::size_t>(it - 1)], 0.0}, dim);
            double a = k.cdot(q[static_cast<std::size_t>(it)].data(), w.data(), dim).real();
            alpha.push_back(a);
            k.caxpy(w.data(), q[static_cast<std::size_t>(it)].data(), cplx{-a, 0.0}, dim);
            // full reorthogonalization; subspaces are tiny compared to dim
            for (int j = 0; j <= it; ++j) {
                cplx c = k.cdot(q[static_cast<std::size_t>(j)].data(), w.data(), dim);
                k.caxpy(w.data(), q[static_cast<std::size_t>(j)].data(), -c, dim);
            }
            double b = std::sqrt(k.norm_sq(w.data(), dim));

            coeff = tridiag_exp_e1(alpha, beta, h);
            double err = b * std::abs(coeff(it));
            if (b < 1e-14 || err < tol) {
                converged = true;
                break;
            }
            if (it + 1 == mmax) break;
            beta.push_back(b);
            auto& qn = q.emplace_back(w);
            k.cscale(qn.data(), cplx{1.0 / b, 0.0}, dim);
        }

        if (!converged) {
            internal_check(depth < 12, "Krylov propagator failed to converge");
            step(v, h / 2, omega, delta, phi, depth + 1);
            step(v, h / 2, omega, delta, phi, depth + 1);
            return;
        }

        std::fill(v.begin(), v.end(), cplx{0.0, 0.0});
        for (std::size_t j = 0; j < q.size() && j < static_cast<std::size_t>(coeff.size()); ++j)
            k.caxpy(v.data(), q[j].data(), beta0 * coeff(static_cast<Eigen::Index>(j)), dim);
    }
};

void check_state_matches(const QuantumState& state, const Hamiltonian& ham) {
    if (state.dim() != ham.dim) throw InputError("state dimension does not match the register");
    if ((state.basis == QuantumState::Basis::full) != (ham.basis == QuantumState::Basis::full))
        throw InputError("state basis does not match the simulation mode");
}

} // namespace

QuantumState make_all_ground(const AtomRegister& reg, const EvolveConfig& cfg) {
    Hamiltonian ham = build_hamiltonian(reg, cfg);
    QuantumState state;
    state.basis = ham.basis;
    state.n_atoms = reg.n();
    state.amplitudes.assign(ham.dim, cplx{0.0, 0.0});
    state.amplitudes[0] = 1.0; // mask 0 sorts first in both bases
    state.basis_states = std::move(ham.states);
    return state;
}

QuantumState evolve(QuantumState state, const AtomRegister& reg, const PulseSchedule& schedule,
                    const EvolveConfig& cfg, EvolveStats* stats) {
    schedule.validate(reg.n());
    Hamiltonian ham = build_hamiltonian(reg, cfg);
    add_local_delta(ham, schedule.local_delta);
    check_state_matches(state, ham);

    double local_max = 0.0;
    for (double d : schedule.local_delta) local_max = std::max(local_max, std::abs(d));
    double scale = schedule.delta.max_abs() + local_max + schedule.omega.max_abs() + ham.max_pair_v;
    scale = std::max(scale, 1e-9);
    auto nsteps = static_cast<std::size_t>(std::ceil(schedule.duration * scale / cfg.step_scale));
    nsteps = std::max<std::size_t>(nsteps, 1);
    double h = schedule.duration / static_cast<double>(nsteps);

    Propagator prop{ham, cfg.krylov_tol};
    EvolveStats local_stats;
    local_stats.steps = nsteps;
    local_stats.step = h;
    const auto& k = kernels::active();
    for (std::size_t i = 0; i < nsteps; ++i) {
        double tm = (static_cast<double>(i) + 0.5) * h;
        prop.step(state.amplitudes, h, schedule.omega(tm), schedule.delta(tm), schedule.phase(tm));
        double nm = state.norm();
        double drift = std::abs(nm - 1.0);
        internal_check(drift < 1e-8, "norm drift beyond 1e-8 in one step");
        k.cscale(state.amplitudes.data(), cplx{1.0 / nm, 0.0}, state.amplitudes.size());
        local_stats.max_step_drift = std::max(local_stats.max_step_drift, drift);
        local_stats.total_drift += drift;
    }
    if (stats) *stats = local_stats;
    return state;
}

GroundStateResult exact_ground_state(const AtomRegister& reg, double delta_end,
                                     const std::vector<double>& local_delta,
                                     const EvolveConfig& cfg) {
    Hamiltonian ham = build_hamiltonian(reg, cfg);
    add_local_delta(ham, local_delta);
    GroundStateResult res;
    res.energy = 0.0;
    std::vector<double> energy(ham.dim);
    kernels::active().scale_add(energy.data(), ham.excount.data(), ham.static_diag.data(),
                                -delta_end, ham.dim);
    double emin = energy[0];
    for (double e : energy) emin = std::min(emin, e);
    double tol = 1e-9 * std::max(1.0, std::abs(emin));
    for (std::size_t i = 0; i < ham.dim; ++i)
        if (energy[i] <= emin + tol)
            res.states.push_back(ham.basis == QuantumState::Basis::full ? i : ham.states[i]);
    res.energy = emin;
    std::sort(res.states.begin(), res.states.end());
    return res;
}

ShotHistogram measure(const QuantumState& state, std::uint64_t shots, std::uint64_t seed) {
    if (shots < 1) throw InputError("measure requires at least one shot");
    std::vector<double> cdf(state.dim());
    double acc = 0.0;
    for (std::size_t i = 0; i < state.dim(); ++i) {
        acc += std::norm(state.amplitudes[i]);
        cdf[i] = acc;
    }
    internal_check(std::abs(acc - 1.0) < 1e-6, "measurement on an unnormalized state");
    Rng rng = Rng::stream(seed, "measure");
    std::map<std::uint64_t, std::uint64_t> counts;
    for (std::uint64_t s = 0; s < shots; ++s) {
        double u = rng.uniform() * acc;
        std::size_t idx = static_cast<std::size_t>(
            std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        if (idx >= state.dim()) idx = state.dim() - 1;
        std::uint64_t mask =
            state.basis == QuantumState::Basis::full ? idx : state.basis_states[idx];
        ++counts[mask];
    }
    ShotHistogram hist;
    hist.shots = shots;
    for (const auto& [mask, c] : counts) hist.counts.emplace_back(mask, c);
    return hist;
}

std::string bitstring(std::uint64_t mask, int n_atoms) {
    std::string s(static_cast<std::size_t>(n_atoms), '1');
    for (int j = 0; j < n_atoms; ++j)
        if (mask & (1ull << j)) s[static_cast<std::size_t>(j)] = 'r';
    return s;
}

double optimum_overlap(const QuantumState& state, const Graph& g, double optimum_weight) {
    double mass = 0.0;
    double tol = 1e-9 * std::max(1.0, std::abs(optimum_weight));
    for (std::size_t i = 0; i < state.dim(); ++i) {
        double p = std::norm(state.amplitudes[i]);
        if (p == 0.0) continue;
        std::uint64_t mask =
            state.basis == QuantumState::Basis::full ? i : state.basis_states[i];
        VertexSet s = vertex_set_from_mask(g, mask);
        if (std::abs(s.weight - optimum_weight) <= tol && classify_set(g, s).independent)
            mass += p;
    }
    return mass;
}

AdiabaticResult adiabatic_solve(const Graph& g, const SweepParams& params, std::uint64_t shots,
                                const EvolveConfig& cfg, std::uint64_t seed) {
    CompiledRun run = compile_register(g, params);
    QuantumState state = make_all_ground(run.reg, cfg);
    AdiabaticResult res;
    state = evolve(std::move(state), run.reg, run.schedule, cfg, &res.stats);
    res.histogram = measure(state, shots, seed);

    auto oracle_sol = oracle::mwis_exact(g);
    res.oracle_weight = oracle_sol.objective;
    double tol = 1e-9 * std::max(1.0, std::abs(res.oracle_weight));

    std::uint64_t successes = 0;
    std::uint64_t shot_index = 0;
    res.best_weight = -1.0;
    for (const auto& [mask, count] : res.histogram.counts) {
        for (std::uint64_t c = 0; c < count; ++c, ++shot_index) {
            VertexSet s = vertex_set_from_mask(g, mask);
            std::uint64_t shot_seed = Rng::stream(seed, "shot-post", shot_index).next();
            if (cfg.mode == Mode::physical)
                s = postprocess::repair_to_independent(g, s, shot_seed);
            s = postprocess::complete_to_maximal(g, s, shot_seed);
            if (s.weight > res.best_weight) {
                res.best_weight = s.weight;
                res.best_set = s;
            }
            if (std::abs(s.weight - res.oracle_weight) <= tol) ++successes;
        }
    }
    res.success_fraction = static_cast<double>(successes) / static_cast<double>(shots);
    return res;
}

SweepResult parameter_sweep(const Graph& g, const std::vector<double>& durations,
                            const std::vector<double>& omega_maxes,
                            const std::vector<double>& delta_starts,
                            const std::vector<double>& delta_finals, std::uint64_t shots,
                            const EvolveConfig& cfg, std::uint64_t seed, int threads) {
    if (durations.empty() || omega_maxes.empty() || delta_starts.empty() || delta_finals.empty())
        throw InputError("parameter_sweep requires a nonempty grid on every axis");
    std::vector<SweepParams> grid;
    for (double t : durations)
        for (double om : omega_maxes)
            for (double d0 : delta_starts)
                for (double df : delta_finals) grid.push_back(SweepParams{t, om, d0, df});

    SweepResult res;
    res.table.resize(grid.size());

    // Each grid point draws from its own derived seed, so threading over
    // points cannot change any stream.
    std::atomic<std::size_t> next{0};
    auto runner = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= grid.size()) return;
            std::uint64_t point_seed = Rng::stream(seed, "sweep", i).next();
            auto r = adiabatic_solve(g, grid[i], shots, cfg, point_seed);
            double mean = 0.0;
            std::uint64_t shot_index = 0;
            for (const auto& [mask, count] : r.histogram.counts) {
                for (std::uint64_t c = 0; c < count; ++c, ++shot_index) {
                    VertexSet s = vertex_set_from_mask(g, mask);
                    std::uint64_t shot_seed = Rng::stream(point_seed, "shot-post", shot_index).next();
                    if (cfg.mode == Mode::physical)
                        s = postprocess::repair_to_independent(g, s, shot_seed);
                    s = postprocess::complete_to_maximal(g, s, shot_seed);
                    mean += s.weight;
                }
            }
            res.table[i].params = grid[i];
            res.table[i].mean_weight = mean / static_cast<double>(shots);
            res.table[i].success_fraction = r.success_fraction;
        }
    };
    int nthreads = std::max(1, std::min<int>(threads, static_cast<int>(grid.size())));
    if (nthreads == 1) {
        runner();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(runner);
        for (auto& th : pool) th.join();
    }

    res.best_index = 0;
    for (std::size_t i = 1; i < res.table.size(); ++i)
        if (res.table[i].mean_weight > res.table[res.best_index].mean_weight + 1e-12)
            res.best_index = i;
    return res;
}

double tv_distance_to_gibbs(const ShotHistogram& hist, const Graph& g, double nu) {
    oracle::Caps caps;
    double z = oracle::partition_function(g, nu, caps).z;
    std::map<std::uint64_t, double> exact;
    oracle::enumerate_independent_sets(g, [&](const VertexSet& s) {
        exact[mask_from_set(s)] =
            std::pow(nu, static_cast<double>(s.members.size())) / z;
    });
    double tv = 0.0;
    std::map<std::uint64_t, double> freq;
    for (const auto& [mask, c] : hist.counts)
        freq[mask] = static_cast<double>(c) / static_cast<double>(hist.shots);
    for (const auto& [mask, p] : exact) {
        auto it = freq.find(mask);
        tv += std::abs(p - (it == freq.end() ? 0.0 : it->second));
    }
    for (const auto& [mask, q] : freq)
        if (!exact.count(mask)) tv += q;
    return tv / 2.0;
}

json register_to_json(const AtomRegister& reg) {
    json positions = json::array();
    for (const auto& p : reg.positions) positions.push_back({p.x, p.y});
    return json{{"positions", positions},
                {"c6", reg.c6},
                {"blockade_radius", reg.blockade_radius},
                {"weights", reg.weights},
                {"length_scale", reg.length_scale}};
}

AtomRegister register_from_json(const json& j) {
    try {
        AtomRegister reg;
        for (const auto& p : j.at("positions"))
            reg.positions.push_back(Vec2{p.at(0).get<double>(), p.at(1).get<double>()});
        reg.c6 = j.at("c6").get<double>();
        reg.blockade_radius = j.at("blockade_radius").get<double>();
        if (j.contains("weights")) reg.weights = j["weights"].get<std::vector<double>>();
        if (j.contains("length_scale")) reg.length_scale = j["length_scale"].get<double>();
        if (!(reg.c6 > 0.0) || !(reg.blockade_radius > 0.0))
            throw InputError("register requires positive c6 and blockade radius");
        return reg;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed register JSON: ") + e.what());
    }
}

namespace {

json pwl_to_json(const PiecewiseLinear& p) { return json{{"t", p.times}, {"v", p.values}}; }

PiecewiseLinear pwl_from_json(const json& j) {
    PiecewiseLinear p;
    p.times = j.at("t").get<std::vector<double>>();
    p.values = j.at("v").get<std::vector<double>>();
    return p;
}

} // namespace

json schedule_to_json(const PulseSchedule& s) {
    return json{{"duration", s.duration},
                {"omega", pwl_to_json(s.omega)},
                {"delta", pwl_to_json(s.delta)},
                {"phase", pwl_to_json(s.phase)},
                {"local_delta", s.local_delta}};
}

PulseSchedule schedule_from_json(const json& j) {
    try {
        PulseSchedule s;
        s.duration = j.at("duration").get<double>();
        s.omega = pwl_from_json(j.at("omega"));
        s.delta = pwl_from_json(j.at("delta"));
        s.phase = j.contains("phase") ? pwl_from_json(j["phase"])
                                      : PiecewiseLinear::constant(s.duration, 0.0);
        if (j.contains("local_delta")) s.local_delta = j["local_delta"].get<std::vector<double>>();
        return s;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed schedule JSON: ") + e.what());
    }
}

void write_histogram_csv(const std::filesystem::path& path, const ShotHistogram& hist,
                         int n_atoms) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write file: " + path.string());
    out << "bitstring,count\n";
    for (const auto& [mask, c] : hist.counts) out << bitstring(mask, n_atoms) << "," << c << "\n";
}

} // namespace iset::rydberg
