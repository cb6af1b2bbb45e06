#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "iset/graph.hpp"
#include "iset/kernels.hpp"
#include <json.hpp>

namespace iset::rydberg {

// Piecewise-linear control waveform on [0, duration].
struct PiecewiseLinear {
    std::vector<double> times;
    std::vector<double> values;

    double operator()(double t) const;
    double max_abs() const;
    static PiecewiseLinear constant(double duration, double value);
};

// Time-dependent drive: global Rabi frequency and detuning plus static
// per-atom detuning offsets carrying the vertex weights. hbar = 1.
struct PulseSchedule {
    double duration = 0.0;
    PiecewiseLinear omega; // >= 0
    PiecewiseLinear delta;
    PiecewiseLinear phase;
    std::vector<double> local_delta; // empty means all zero

    void validate(int n_atoms) const;
};

struct AtomRegister {
    std::vector<Vec2> positions; // in units of the blockade radius after compile
    double c6 = 1.0;
    double blockade_radius = 1.0;
    std::vector<double> weights;      // source vertex weights, for bookkeeping
    double length_scale = 1.0;        // original length units per internal unit

    int n() const { return static_cast<int>(positions.size()); }
};

enum class Mode { physical, hard_blockade };
const char* to_string(Mode m);
Mode mode_from_string(const std::string& s);

struct EvolveConfig {
    Mode mode = Mode::hard_blockade;
    // Step control: h * (max|Delta| + Omega_max + max pair interaction) <= step_scale.
    double step_scale = 0.1;
    int max_full_atoms = 16;
    std::size_t max_blockaded_dim = 1ull << 20;
    double krylov_tol = 1e-12;
    double interaction_cutoff = 4.0; // in blockade radii; physical mode only
};

struct QuantumState {
    enum class Basis { full, blockaded };
    Basis basis = Basis::full;
    int n_atoms = 0;
    std::vector<kernels::cplx> amplitudes;
    std::vector<std::uint64_t> basis_states; // blockaded: independent-set masks, ascending

    double norm() const;
    std::size_t dim() const { return amplitudes.size(); }
};

// R_b = (C6 / Delta)^(1/6)
double blockade_radius(double c6, double delta);

struct SweepParams {
    double duration = 4.0;
    double omega_max = 2.5;
    double delta_start = 6.0; // sweep begins at -delta_start
    double delta_final = 6.0;
};

struct CompiledRun {
    AtomRegister reg;
    PulseSchedule schedule;
};

// Native embedding of a unit-disk graph: atoms at the vertex coordinates
// (rescaled to blockade-radius units), C6 chosen so the blockade radius at
// the weakest final detuning equals the disk radius, weights encoded as
// negative static detuning offsets. Default drive: Omega trapezoid over
// the first/last 10% of T, Delta linear from -delta_start to +delta_final.
CompiledRun compile_register(const Graph& g, const SweepParams& params);

// All atoms in the ground state |11...1> (no Rydberg excitations).
QuantumState make_all_ground(const AtomRegister& reg, const EvolveConfig& cfg);

struct EvolveStats {
    std::size_t steps = 0;
    double step = 0.0;
    double max_step_drift = 0.0;
    double total_drift = 0.0;
};

// Schroedinger evolution by fixed-step midpoint-sampled short-time
// propagators (Lanczos exponentials). The norm is renormalized every step;
// per-step drift beyond 1e-8 raises an internal error.
QuantumState evolve(QuantumState state, const AtomRegister& reg, const PulseSchedule& schedule,
                    const EvolveConfig& cfg, EvolveStats* stats = nullptr);

struct GroundStateResult {
    double energy = 0.0;
    std::vector<std::uint64_t> states; // all bitstring masks at the minimum
};

// Diagonal (Omega = 0) ground state at the given final global detuning plus
// optional per-atom offsets (the schedule endpoint). In hard-blockade mode
// the argmax set is exactly the MWIS of the register's disk graph.
GroundStateResult exact_ground_state(const AtomRegister& reg, double delta_end,
                                     const std::vector<double>& local_delta,
                                     const EvolveConfig& cfg);

struct ShotHistogram {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> counts; // (mask, count), mask ascending
    std::uint64_t shots = 0;
};

ShotHistogram measure(const QuantumState& state, std::uint64_t shots, std::uint64_t seed);

// '1' = ground, 'r' = Rydberg, atom 0 first.
std::string bitstring(std::uint64_t mask, int n_atoms);

// Probability mass on basis states that are independent sets of g with
// weight equal to the optimum.
double optimum_overlap(const QuantumState& state, const Graph& g, double optimum_weight);

struct AdiabaticResult {
    VertexSet best_set;
    double best_weight = 0.0;
    double oracle_weight = 0.0;
    double success_fraction = 0.0; // postprocessed shots matching the oracle optimum
    ShotHistogram histogram;
    EvolveStats stats;
};

// compile -> evolve from |11...1> -> measure -> repair/complete each shot.
AdiabaticResult adiabatic_solve(const Graph& g, const SweepParams& params, std::uint64_t shots,
                                const EvolveConfig& cfg, std::uint64_t seed);

struct SweepPoint {
    SweepParams params;
    double mean_weight = 0.0;
    double success_fraction = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> table;
    std::size_t best_index = 0; // by mean postprocessed weight
};

// Grid search over (T, Omega_max, Delta_0, Delta_final); the classical
// stand-in for variational parameter optimization.
SweepResult parameter_sweep(const Graph& g, const std::vector<double>& durations,
                            const std::vector<double>& omega_maxes,
                            const std::vector<double>& delta_starts,
                            const std::vector<double>& delta_finals, std::uint64_t shots,
                            const EvolveConfig& cfg, std::uint64_t seed, int threads = 1);

// Total-variation distance between a measurement histogram and the exact
// hard-core Gibbs distribution at uniform activity nu (diagnostic only).
double tv_distance_to_gibbs(const ShotHistogram& hist, const Graph& g, double nu);

nlohmann::json register_to_json(const AtomRegister& reg);
AtomRegister register_from_json(const nlohmann::json& j);
nlohmann::json schedule_to_json(const PulseSchedule& s);
PulseSchedule schedule_from_json(const nlohmann::json& j);
void write_histogram_csv(const std::filesystem::path& path, const ShotHistogram& hist, int n_atoms);

} // namespace iset::rydberg
