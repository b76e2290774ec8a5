// oracle_sim.hpp — brute-force validator for the reduced protocol engine.
//
// Simulates the literal gate/evolution/measurement sequence on the full
// 2^m state vector of (A1, chain sites 1..N, memories 1..k), m = 1 + N + k.
// Qubit q maps to bit q of the basis index: bit 0 = A1, bits 1..N = chain
// sites (bit 1 doubles as A2, the transfer chain's first site; during
// decoding A1 takes the site-1 role), bits N+1..N+k = memories.  Bit set
// means spin up.
//
// Evolution uses the full-Hamiltonian spectral decomposition; gates are
// explicit CNOT/SWAP bit permutations; measurements follow the Born rule.
// The decode CNOT's transient two-excitation component is represented
// exactly here, which is what certifies the engine's combined-branch
// shortcut.  Desk-scale only: m <= 14 enforced.

#pragma once

#include <string>
#include <vector>

#include "qst/chain_model.hpp"
#include "qst/protocol_engine.hpp"
#include "qst/scheduler.hpp"

namespace qst::oracle {

inline constexpr int kMaxQubits = 14;

struct DecodeStepTrace {
    double p_success = 0.0;    // conditional on reaching this step
    double eta = 0.0;          // unconditional success probability
    Complex bob_alpha{0.0, 0.0};
    Complex bob_beta{0.0, 0.0};
    bool degenerate = false;   // p_success == 0, Bob state undefined
};

/// Branch probabilities and conditional states along the protocol, in a
/// representation shared with the engine-side extraction (verification.hpp).
struct ProtocolTrace {
    std::vector<Complex> memory_after_transfer;
    double p_loss = 0.0;
    std::vector<DecodeStepTrace> decode;
};

/// Executes encode, transfer (schedule), cooling, and `decode_steps` decode
/// rounds on the dense state vector.  Throws std::length_error above the
/// size cap.
ProtocolTrace full_run(const QubitState& psi, const ChainSpec& spec,
                       const Schedule& schedule, int decode_steps,
                       bool cooling = true);

struct EquivalenceResult {
    bool pass = false;
    double max_deviation = 0.0;
    std::string worst_location;
};

/// Compares every branch probability and conditional Bob state of two
/// traces.  Shape mismatches fail outright.
EquivalenceResult equivalence_check(const ProtocolTrace& engine_trace,
                                    const ProtocolTrace& oracle_trace,
                                    double tol);

/// Largest |H_st| between basis states of different excitation number;
/// zero for any σ^z_tot-conserving Hamiltonian.
double max_excitation_mixing(const Eigen::MatrixXd& h);

/// Human-readable trace dump for debugging failed comparisons.
std::string to_text(const ProtocolTrace& trace);

/// Full transfer-phase Hamiltonian (chain bits coupled, A1 and memories
/// idle), exposed for the conservation tests.
Eigen::MatrixXd build_full_transfer_hamiltonian(const ChainSpec& spec,
                                                int memory_count);

}  // namespace qst::oracle
