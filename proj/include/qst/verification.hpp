// verification.hpp — cross-check suites tying the reduced engine to the
// brute-force oracle and to the protocol's conclusiveness guarantees.
// Used by both the `verify` CLI command and the acceptance tests.

#pragma once

#include <cstdint>
#include <string>

#include "qst/oracle_sim.hpp"

namespace qst {

/// Runs the protocol on the reduced engine and extracts the same trace
/// quantities full_run produces, for equivalence checking.
oracle::ProtocolTrace engine_trace(const QubitState& psi,
                                   const ChainSpec& spec,
                                   const Schedule& schedule, int decode_steps,
                                   bool cooling = true);

struct EquivalenceSummary {
    int trials = 0;
    double max_deviation = 0.0;
    std::string worst_location;
    bool pass = false;
};

/// Randomized engine-vs-oracle trials over N <= 4, k <= 3 chains with random
/// schedules, inputs, and coupling disorder.  Deterministic per seed.
EquivalenceSummary oracle_equivalence_suite(int n_trials, std::uint64_t seed,
                                            double tol);

struct ConclusivenessSummary {
    int chains = 0;
    int inputs = 0;
    double max_probability_spread = 0.0;  // across inputs, per step
    double max_fidelity_error = 0.0;      // |1 - fidelity| on success branches
    bool pass = false;
};

/// For each disordered chain, runs the full pipeline over many random input
/// qubits and checks that every step's unconditional success probability is
/// input-independent and that the success-conditioned Bob state reproduces
/// the input exactly.
ConclusivenessSummary conclusiveness_suite(int n_inputs, int n_chains,
                                           double delta, std::uint64_t seed,
                                           double spread_tol,
                                           double fidelity_tol);

struct PropagatorSummary {
    double max_deviation = 0.0;
    bool pass = false;
};

/// Unitarity of the amplitude matrix f(t) over sampled times.
PropagatorSummary unitarity_check(const ChainSpec& spec, int n_times,
                                  double t_max, double tol);

/// Spectral-sum propagator against the closed-form uniform-chain amplitude
/// for N in [2, n_max].
PropagatorSummary closed_form_check(int n_max, int n_times, double tol);

/// Haar-like random qubit from a seeded generator.
QubitState random_qubit(std::uint64_t seed);

}  // namespace qst
