#include "qst/protocol_engine.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace qst {

namespace {

constexpr double kNormTol = 1e-9;

double abs2(Complex c) { return std::norm(c); }

void require(bool cond, const char* msg) {
    if (!cond) throw std::logic_error(msg);
}

}  // namespace

double QubitState::norm_squared() const { return abs2(alpha) + abs2(beta); }

double QubitState::fidelity(const QubitState& other) const {
    return abs2(std::conj(alpha) * other.alpha + std::conj(beta) * other.beta);
}

void Topology::validate() const {
    if (chain_length < 2)
        throw std::invalid_argument("Topology: chain length must be >= 2");
    if (memory_count < 1)
        throw std::invalid_argument("Topology: memory count must be >= 1");
}

Complex SystemState::site(int n) const {
    if (n < 1 || n > topo.chain_length)
        throw std::out_of_range("SystemState::site: index out of range");
    if (n == 1) return sw == SwitchConfig::A1Connected ? a1 : a2;
    if (n == topo.chain_length) return bob;
    return interior(n - 2);
}

Complex SystemState::detached_a() const {
    return sw == SwitchConfig::A1Connected ? a2 : a1;
}

Complex SystemState::memory(int l) const {
    if (l < 1 || l > topo.memory_count)
        throw std::out_of_range("SystemState::memory: index out of range");
    return memories(l - 1);
}

double SystemState::total_norm() const {
    return abs2(vacuum) + abs2(a1) + abs2(a2) + interior.squaredNorm() +
           abs2(bob) + memories.squaredNorm();
}

SystemState init_state(const QubitState& psi, const Topology& topo) {
    topo.validate();
    if (std::abs(psi.norm_squared() - 1.0) > kNormTol)
        throw std::invalid_argument("init_state: input qubit not normalized");
    SystemState state;
    state.topo = topo;
    state.input = psi;
    state.a1 = psi.alpha;
    state.vacuum = psi.beta;
    state.interior = Eigen::VectorXcd::Zero(topo.chain_length - 2);
    state.memories = Eigen::VectorXcd::Zero(topo.memory_count);
    state.consumed.assign(topo.memory_count, false);
    state.sw = SwitchConfig::Disconnected;
    return state;
}

void encode_cnot(SystemState& state) {
    require(state.sw == SwitchConfig::Disconnected,
            "encode_cnot: switch must be open");
    require(abs2(state.a2) < 1e-24, "encode_cnot: A2 must be empty");
    state.a2 = state.vacuum;
    state.vacuum = Complex{0.0, 0.0};
}

void set_switch(SystemState& state, SwitchConfig config) { state.sw = config; }

void evolve(SystemState& state, const SpectralData& sd, double tau) {
    require(state.sw != SwitchConfig::Disconnected,
            "evolve: chain is disconnected");
    const int n = state.topo.chain_length;
    if (sd.size() != n)
        throw std::invalid_argument("evolve: spectral data size mismatch");
    Eigen::VectorXcd v(n);
    v(0) = state.sw == SwitchConfig::A1Connected ? state.a1 : state.a2;
    v.segment(1, n - 2) = state.interior;
    v(n - 1) = state.bob;
    v = propagate(sd, v, tau);
    (state.sw == SwitchConfig::A1Connected ? state.a1 : state.a2) = v(0);
    state.interior = v.segment(1, n - 2);
    state.bob = v(n - 1);
}

void swap_bob_memory(SystemState& state, int l) {
    if (l < 1 || l > state.topo.memory_count)
        throw std::out_of_range("swap_bob_memory: memory index out of range");
    require(!state.consumed[l - 1],
            "swap_bob_memory: memory already consumed");
    std::swap(state.bob, state.memories(l - 1));
}

std::vector<StepRecord> transfer_run(SystemState& state, const SpectralData& sd,
                                     const Schedule& schedule) {
    schedule.validate();
    require(state.sw == SwitchConfig::A2Connected,
            "transfer_run: state must be A2-connected");
    if (schedule.steps() > state.topo.memory_count)
        throw std::invalid_argument(
            "transfer_run: schedule longer than memory count");
    std::vector<StepRecord> records;
    records.reserve(schedule.steps());
    for (int i = 0; i < schedule.steps(); ++i) {
        evolve(state, sd, schedule.intervals[i]);
        swap_bob_memory(state, i + 1);
        records.push_back(StepRecord{i + 1, schedule.intervals[i],
                                     EventKind::Swap,
                                     abs2(state.memories(i))});
    }
    return records;
}

double cool_chain(SystemState& state) {
    require(state.sw == SwitchConfig::A2Connected,
            "cool_chain: expected an A2-connected state");
    const double p_loss =
        abs2(state.a2) + state.interior.squaredNorm() + abs2(state.bob);
    const double survival = 1.0 - p_loss;
    if (survival <= 1e-15)
        throw std::domain_error("cool_chain: cooling removed all amplitude");
    state.a2 = Complex{0.0, 0.0};
    state.interior.setZero();
    state.bob = Complex{0.0, 0.0};
    const double scale = 1.0 / std::sqrt(survival);
    state.vacuum *= scale;
    state.a1 *= scale;
    state.memories *= scale;
    return p_loss;
}

DecodeOutcome decode_step(SystemState& state, const SpectralData& sd, int l,
                          double tau) {
    require(state.sw == SwitchConfig::A1Connected,
            "decode_step: state must be A1-connected");
    if (l < 1 || l > state.topo.memory_count)
        throw std::out_of_range("decode_step: memory index out of range");
    require(!state.consumed[l - 1], "decode_step: memory already consumed");

    evolve(state, sd, tau);

    DecodeOutcome outcome;
    const Complex c_bob = state.bob;
    const Complex c_mem = state.memories(l - 1);
    outcome.p_success = abs2(c_bob) + abs2(c_mem);
    if (outcome.p_success > 0.0) {
        const double s = 1.0 / std::sqrt(outcome.p_success);
        QubitState bob{c_bob * s, c_mem * s};
        outcome.fidelity_on_success = state.input.fidelity(bob);
        outcome.bob_on_success = bob;
    }

    // Failure branch: Bob measured empty, memory l measured empty.
    state.bob = Complex{0.0, 0.0};
    state.memories(l - 1) = Complex{0.0, 0.0};
    state.consumed[l - 1] = true;
    const double p_fail = 1.0 - outcome.p_success;
    if (p_fail > 1e-15) {
        const double scale = 1.0 / std::sqrt(p_fail);
        state.vacuum *= scale;
        state.a1 *= scale;
        state.a2 *= scale;
        state.interior *= scale;
        state.memories *= scale;
    }
    return outcome;
}

EtaProfile DecodeReport::profile() const {
    EtaProfile p;
    p.eta.reserve(steps.size());
    for (const auto& s : steps) p.eta.push_back(s.eta);
    return p;
}

DecodeReport decode_run(SystemState& state, const SpectralData& sd,
                        const Schedule& schedule, double prior_survival) {
    schedule.validate();
    if (schedule.steps() > state.topo.memory_count)
        throw std::invalid_argument(
            "decode_run: schedule longer than memory count");
    DecodeReport report;
    const auto times = schedule.cumulative();
    double reach = prior_survival;  // probability of reaching the current step
    for (int i = 0; i < schedule.steps(); ++i) {
        DecodeOutcome out = decode_step(state, sd, i + 1, schedule.intervals[i]);
        DecodeStepReport step;
        step.step = i + 1;
        step.tau = schedule.intervals[i];
        step.time = times[i];
        step.p_conditional = out.p_success;
        step.eta = reach * out.p_success;
        step.bob_on_success = out.bob_on_success;
        step.fidelity_on_success = out.fidelity_on_success;
        report.steps.push_back(step);
        report.eta_cumulative += step.eta;
        reach *= (1.0 - out.p_success);
    }
    report.exhausted = report.eta_cumulative < 1.0 - 1e-12;
    return report;
}

SampledDecode decode_run_sampled(SystemState& state, const SpectralData& sd,
                                 const Schedule& schedule, std::uint64_t seed) {
    schedule.validate();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    SampledDecode result;
    for (int i = 0; i < schedule.steps(); ++i) {
        result.elapsed += schedule.intervals[i];
        DecodeOutcome out = decode_step(state, sd, i + 1, schedule.intervals[i]);
        const bool hit = unit(rng) < out.p_success;
        result.events.push_back(StepRecord{
            i + 1, schedule.intervals[i],
            hit ? EventKind::DecodeSuccess : EventKind::DecodeFailure,
            out.p_success});
        if (hit) {
            result.stop_step = i + 1;
            result.success = true;
            result.bob = out.bob_on_success;
            return result;
        }
    }
    result.stop_step = 0;
    result.success = false;
    return result;
}

}  // namespace qst
