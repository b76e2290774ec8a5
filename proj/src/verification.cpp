#include "qst/verification.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace qst {

oracle::ProtocolTrace engine_trace(const QubitState& psi,
                                   const ChainSpec& spec,
                                   const Schedule& schedule, int decode_steps,
                                   bool cooling) {
    const SpectralData sd = spectral_decompose(spec);
    Topology topo{spec.length, schedule.steps()};
    SystemState state = init_state(psi, topo);
    encode_cnot(state);
    set_switch(state, SwitchConfig::A2Connected);
    transfer_run(state, sd, schedule);

    oracle::ProtocolTrace trace;
    trace.memory_after_transfer.reserve(schedule.steps());
    for (int l = 1; l <= schedule.steps(); ++l)
        trace.memory_after_transfer.push_back(state.memory(l));

    if (cooling) trace.p_loss = cool_chain(state);
    set_switch(state, SwitchConfig::A1Connected);

    Schedule decode_schedule;
    decode_schedule.intervals.assign(schedule.intervals.begin(),
                                     schedule.intervals.begin() + decode_steps);
    const double survival = cooling ? 1.0 - trace.p_loss : 1.0;
    const DecodeReport report =
        decode_run(state, sd, decode_schedule, survival);

    trace.decode.reserve(report.steps.size());
    for (const auto& step : report.steps) {
        oracle::DecodeStepTrace t;
        t.p_success = step.p_conditional;
        t.eta = step.eta;
        if (step.bob_on_success) {
            t.bob_alpha = step.bob_on_success->alpha;
            t.bob_beta = step.bob_on_success->beta;
        } else {
            t.degenerate = true;
        }
        trace.decode.push_back(t);
    }
    return trace;
}

QubitState random_qubit(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Complex a{gauss(rng), gauss(rng)};
    Complex b{gauss(rng), gauss(rng)};
    const double norm = std::sqrt(std::norm(a) + std::norm(b));
    return QubitState{a / norm, b / norm};
}

EquivalenceSummary oracle_equivalence_suite(int n_trials, std::uint64_t seed,
                                            double tol) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick_n(2, 4);
    std::uniform_int_distribution<int> pick_k(1, 3);
    std::uniform_real_distribution<double> pick_tau(0.2, 8.0);
    std::uniform_real_distribution<double> pick_delta(0.0, 0.3);

    EquivalenceSummary summary;
    summary.trials = n_trials;
    summary.pass = true;
    for (int trial = 0; trial < n_trials; ++trial) {
        const int n = pick_n(rng);
        const int k = pick_k(rng);
        DisorderModel dm{1.0, pick_delta(rng), rng()};
        const ChainSpec spec = sample_random_chain(dm, n);

        Schedule schedule;
        for (int i = 0; i < k; ++i)
            schedule.intervals.push_back(pick_tau(rng));
        const QubitState psi = random_qubit(rng());

        const auto from_engine = engine_trace(psi, spec, schedule, k);
        const auto from_oracle = oracle::full_run(psi, spec, schedule, k);
        const auto check =
            oracle::equivalence_check(from_engine, from_oracle, tol);
        if (check.max_deviation > summary.max_deviation) {
            summary.max_deviation = check.max_deviation;
            summary.worst_location = "trial " + std::to_string(trial + 1) +
                                     ": " + check.worst_location;
        }
        summary.pass = summary.pass && check.pass;
    }
    return summary;
}

ConclusivenessSummary conclusiveness_suite(int n_inputs, int n_chains,
                                           double delta, std::uint64_t seed,
                                           double spread_tol,
                                           double fidelity_tol) {
    constexpr int kChainLengths[] = {4, 6, 8, 10};
    constexpr int kDecodeSteps = 8;

    ConclusivenessSummary summary;
    summary.chains = n_chains;
    summary.inputs = n_inputs;

    std::mt19937_64 rng(seed);
    for (int c = 0; c < n_chains; ++c) {
        const int n = kChainLengths[c % 4];
        DisorderModel dm{1.0, delta, rng()};
        const ChainSpec spec = sample_random_chain(dm, n);
        const Schedule schedule =
            greedy_optimize_schedule(spec, kDecodeSteps, SchedulerOptions{});
        const SpectralData sd = spectral_decompose(spec);

        std::vector<double> eta_min(kDecodeSteps,
                                    std::numeric_limits<double>::infinity());
        std::vector<double> eta_max(kDecodeSteps,
                                    -std::numeric_limits<double>::infinity());
        for (int q = 0; q < n_inputs; ++q) {
            const QubitState psi = random_qubit(rng());
            Topology topo{n, kDecodeSteps};
            SystemState state = init_state(psi, topo);
            encode_cnot(state);
            set_switch(state, SwitchConfig::A2Connected);
            transfer_run(state, sd, schedule);
            const double p_loss = cool_chain(state);
            set_switch(state, SwitchConfig::A1Connected);
            const DecodeReport report =
                decode_run(state, sd, schedule, 1.0 - p_loss);
            for (int i = 0; i < kDecodeSteps; ++i) {
                const auto& step = report.steps[i];
                eta_min[i] = std::min(eta_min[i], step.eta);
                eta_max[i] = std::max(eta_max[i], step.eta);
                if (step.fidelity_on_success)
                    summary.max_fidelity_error =
                        std::max(summary.max_fidelity_error,
                                 std::abs(*step.fidelity_on_success - 1.0));
            }
        }
        for (int i = 0; i < kDecodeSteps; ++i)
            summary.max_probability_spread = std::max(
                summary.max_probability_spread, eta_max[i] - eta_min[i]);
    }
    summary.pass = summary.max_probability_spread < spread_tol &&
                   summary.max_fidelity_error < fidelity_tol;
    return summary;
}

PropagatorSummary unitarity_check(const ChainSpec& spec, int n_times,
                                  double t_max, double tol) {
    const SpectralData sd = spectral_decompose(spec);
    const int n = spec.length;
    PropagatorSummary summary;
    for (int i = 1; i <= n_times; ++i) {
        const double t = t_max * i / n_times;
        const Eigen::MatrixXcd f = propagator(sd, t);
        const double dev =
            (f * f.adjoint() - Eigen::MatrixXcd::Identity(n, n))
                .cwiseAbs()
                .maxCoeff();
        summary.max_deviation = std::max(summary.max_deviation, dev);
    }
    summary.pass = summary.max_deviation <= tol;
    return summary;
}

PropagatorSummary closed_form_check(int n_max, int n_times, double tol) {
    PropagatorSummary summary;
    for (int n = 2; n <= n_max; ++n) {
        const ChainSpec spec = ChainSpec::uniform(n);
        const SpectralData sd = spectral_decompose(spec);
        for (int i = 1; i <= n_times; ++i) {
            const double t = 0.7 * n * i / n_times;
            const Complex via_spectrum = propagator_amplitude(sd, n, 1, t);
            const Complex via_formula = uniform_chain_amplitude(n, 1.0, n, 1, t);
            summary.max_deviation = std::max(
                summary.max_deviation, std::abs(via_spectrum - via_formula));
        }
    }
    summary.pass = summary.max_deviation <= tol;
    return summary;
}

}  // namespace qst
