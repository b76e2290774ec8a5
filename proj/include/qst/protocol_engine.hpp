// protocol_engine.hpp — reduced state and primitives of the conclusive
// transfer protocol.
//
// The whole register (A1, A2, chain interior, Bob, k memories) stays inside
// span{vacuum} ⊕ single-excitation sector, so a state is a complex amplitude
// per excitation location plus the vacuum amplitude.  SystemState stores the
// two A-spins by name; the switch merely selects which of them plays chain
// site 1, so set_switch never touches amplitudes.
//
// Protocol outline:
//   init → encode_cnot → switch A2 → (evolve τ_i, swap Bob↔M_i)^j
//        → cool → switch A1 → (evolve τ_l, decode at M_l)^j
// The decode CNOT (at M_l, controlled by Bob) followed by the immediate
// projective measurement of M_l is implemented as one combined branch
// operation: success probability |c_N|² + |m_l|², success branch Bob qubit
// (c_N, m_l)/√p, failure branch with both zeroed and the rest renormalized.
// The transient two-excitation component this hides is validated against the
// full state-vector oracle (oracle_sim).
//
// Unitary primitives preserve the norm to 1e-12; measurement-like primitives
// (cool_chain, decode_step) renormalize to 1.

#pragma once

#include <optional>
#include <vector>

#include "qst/chain_model.hpp"
#include "qst/scheduler.hpp"

namespace qst {

/// One qubit α|1> + β|0>, normalized.
struct QubitState {
    Complex alpha{0.0, 0.0};
    Complex beta{0.0, 0.0};

    double norm_squared() const;

    /// |<this|other>|².
    double fidelity(const QubitState& other) const;
};

struct Topology {
    int chain_length = 0;   // N >= 2
    int memory_count = 0;   // k >= 1

    void validate() const;
};

enum class SwitchConfig { Disconnected, A1Connected, A2Connected };

enum class EventKind { Swap, Cool, DecodeSuccess, DecodeFailure };

struct StepRecord {
    int step = 0;          // 1-based protocol step
    double tau = 0.0;      // interval preceding the event
    EventKind kind = EventKind::Swap;
    double probability = 0.0;
};

/// Amplitudes over excitation locations.  Value type; copy freely.
struct SystemState {
    Complex vacuum{0.0, 0.0};
    Complex a1{0.0, 0.0};
    Complex a2{0.0, 0.0};
    Eigen::VectorXcd interior;    // chain sites 2..N-1 (size N-2)
    Complex bob{0.0, 0.0};        // chain site N
    Eigen::VectorXcd memories;    // size k
    std::vector<bool> consumed;   // memories already measured
    SwitchConfig sw = SwitchConfig::Disconnected;
    Topology topo;
    QubitState input;             // payload, kept for fidelity reporting

    /// Amplitude of chain site n (1-based).  Site 1 resolves to A1 when
    /// A1-connected, to A2 otherwise (A2 keeps the site-1 labeling while
    /// disconnected).
    Complex site(int n) const;

    /// Amplitude of the A-spin that is not wired to the chain.
    Complex detached_a() const;

    Complex memory(int l) const;   // 1-based

    /// |vac|² + |A1|² + |A2|² + Σ|site|² + Σ|mem|².
    double total_norm() const;
};

/// Payload α on A1, β on the vacuum, everything else empty, switch open.
/// Rejects |α|²+|β|² deviating from 1 by more than 1e-9.
SystemState init_state(const QubitState& psi, const Topology& topo);

/// CNOT at A2 controlled by A1 being zero: moves the vacuum amplitude onto
/// A2, entangling the A-spins (α|10> + β|01>).  Requires the switch open and
/// A2 empty.
void encode_cnot(SystemState& state);

/// Reassigns the chain-site-1 role.  Amplitudes are untouched (instantaneous
/// relabeling).
void set_switch(SystemState& state, SwitchConfig config);

/// Free evolution of the connected chain for time tau.  Vacuum, detached
/// A-spin and memories are stationary (ground energy zero, memories idle).
void evolve(SystemState& state, const SpectralData& sd, double tau);

/// Exact exchange of Bob's amplitude with memory l (1-based).
void swap_bob_memory(SystemState& state, int l);

/// Transfer portion: evolve(τ_i) then swap into memory i, for i = 1..j.
/// Requires an encoded, A2-connected state and j ≤ k.
std::vector<StepRecord> transfer_run(SystemState& state, const SpectralData& sd,
                                     const Schedule& schedule);

/// Projective reset of the chain (A2 + interior + Bob) to its ground state.
/// Returns the excitation probability lost; the surviving branch is
/// renormalized, which preserves every ratio between the A1 (α) amplitude
/// and the stored memory (β) amplitudes.
double cool_chain(SystemState& state);

struct DecodeOutcome {
    double p_success = 0.0;                 // conditional on reaching this step
    std::optional<QubitState> bob_on_success;
    std::optional<double> fidelity_on_success;  // vs the original input
};

/// One decode step: evolve(τ), then CNOT at M_l controlled by Bob plus
/// measurement of M_l as a combined branch operation.  The state passed in
/// becomes the failure branch (renormalized, memory l consumed); the success
/// branch is described by the returned outcome.  p_success == 0 yields a
/// degenerate outcome with no Bob state.
DecodeOutcome decode_step(SystemState& state, const SpectralData& sd, int l,
                          double tau);

struct DecodeStepReport {
    int step = 0;
    double tau = 0.0;
    double time = 0.0;              // cumulative decode time t_i
    double p_conditional = 0.0;     // branch probability at this step
    double eta = 0.0;               // unconditional success probability
    std::optional<QubitState> bob_on_success;
    std::optional<double> fidelity_on_success;
};

struct DecodeReport {
    std::vector<DecodeStepReport> steps;
    double eta_cumulative = 0.0;    // Σ η_i
    bool exhausted = false;         // all steps consumed without certainty

    EtaProfile profile() const;
};

/// Exhaustive decode: walks the failure branch through memories 1..j,
/// recording each step's conditional and unconditional success probability
/// and the success-conditioned Bob state.  `prior_survival` scales the
/// unconditional probabilities by the probability of reaching the decode
/// portion at all (1 − p_loss from cooling); pass 1 for within-branch values.
DecodeReport decode_run(SystemState& state, const SpectralData& sd,
                        const Schedule& schedule, double prior_survival = 1.0);

struct SampledDecode {
    int stop_step = 0;       // 1-based; 0 if no step succeeded
    bool success = false;
    double elapsed = 0.0;    // decode time until stopping
    std::optional<QubitState> bob;
    std::vector<StepRecord> events;  // one per measurement performed
};

/// Monte Carlo trajectory: samples each measurement outcome with a seeded
/// generator and stops at the first success.  The state left behind is only
/// meaningful for unsuccessful trajectories.
SampledDecode decode_run_sampled(SystemState& state, const SpectralData& sd,
                                 const Schedule& schedule, std::uint64_t seed);

}  // namespace qst
