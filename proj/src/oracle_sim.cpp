#include "qst/oracle_sim.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace qst::oracle {

namespace {

using Vec = Eigen::VectorXcd;

void add_hopping(Eigen::MatrixXd& h, int a, int b, double g) {
    const long dim = h.rows();
    const long bita = 1L << a, bitb = 1L << b;
    for (long s = 0; s < dim; ++s) {
        if ((s & bita) && !(s & bitb)) {
            const long t = (s ^ bita) | bitb;
            h(t, s) += g;
            h(s, t) += g;
        }
    }
}

void add_field(Eigen::MatrixXd& h, int q, double b_field) {
    const long dim = h.rows();
    const long bit = 1L << q;
    for (long s = 0; s < dim; ++s)
        if (s & bit) h(s, s) += 2.0 * b_field;
}

// CNOT with the given control polarity.
void apply_cnot(Vec& v, int control, int target, bool control_on_one) {
    const long dim = v.size();
    const long cbit = 1L << control, tbit = 1L << target;
    for (long s = 0; s < dim; ++s) {
        const bool active = control_on_one ? (s & cbit) : !(s & cbit);
        if (active && !(s & tbit)) std::swap(v(s), v(s | tbit));
    }
}

void apply_swap(Vec& v, int a, int b) {
    const long dim = v.size();
    const long bita = 1L << a, bitb = 1L << b;
    for (long s = 0; s < dim; ++s)
        if ((s & bita) && !(s & bitb)) std::swap(v(s), v((s ^ bita) | bitb));
}

Vec evolve_full(const SpectralData& sd, const Vec& v, double tau) {
    Vec w = sd.eigenvectors.transpose().cast<Complex>() * v;
    for (int k = 0; k < sd.size(); ++k)
        w(k) *= std::polar(1.0, -sd.eigenvalues(k) * tau);
    return sd.eigenvectors.cast<Complex>() * w;
}

Eigen::MatrixXd build_full_hamiltonian(const ChainSpec& spec, int memory_count,
                                       bool decode_phase) {
    const int n = spec.length;
    const int qubits = 1 + n + memory_count;
    const long dim = 1L << qubits;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);

    // Site-to-qubit map for the active chain: site 1 is A2 (bit 1) during
    // transfer and A1 (bit 0) during decoding, sites 2..N are bits 2..N.
    auto site_bit = [&](int site) {
        if (site == 1) return decode_phase ? 0 : 1;
        return site;
    };
    for (int i = 1; i < n; ++i)
        add_hopping(h, site_bit(i), site_bit(i + 1), spec.couplings[i - 1]);
    for (int i = 1; i <= n; ++i) add_field(h, site_bit(i), spec.fields[i - 1]);
    return h;
}

}  // namespace

Eigen::MatrixXd build_full_transfer_hamiltonian(const ChainSpec& spec,
                                                int memory_count) {
    spec.validate();
    if (1 + spec.length + memory_count > kMaxQubits)
        throw std::length_error("oracle_sim: size cap exceeded");
    return build_full_hamiltonian(spec, memory_count, false);
}

double max_excitation_mixing(const Eigen::MatrixXd& h) {
    double worst = 0.0;
    for (long s = 0; s < h.rows(); ++s)
        for (long t = 0; t < h.cols(); ++t)
            if (std::popcount(static_cast<unsigned long>(s)) !=
                std::popcount(static_cast<unsigned long>(t)))
                worst = std::max(worst, std::abs(h(t, s)));
    return worst;
}

ProtocolTrace full_run(const QubitState& psi, const ChainSpec& spec,
                       const Schedule& schedule, int decode_steps,
                       bool cooling) {
    spec.validate();
    schedule.validate();
    const int n = spec.length;
    const int k = schedule.steps();
    if (decode_steps < 0 || decode_steps > k)
        throw std::invalid_argument(
            "oracle_sim: decode steps must not exceed transfer steps");
    const int qubits = 1 + n + k;
    if (qubits > kMaxQubits)
        throw std::length_error("oracle_sim: size cap exceeded");
    if (std::abs(psi.norm_squared() - 1.0) > 1e-9)
        throw std::invalid_argument("oracle_sim: input qubit not normalized");

    const long dim = 1L << qubits;
    const int bob_bit = n;
    auto memory_bit = [&](int l) { return n + l; };

    const SpectralData transfer_sd =
        spectral_decompose(build_full_hamiltonian(spec, k, false));
    const SpectralData decode_sd =
        spectral_decompose(build_full_hamiltonian(spec, k, true));

    Vec v = Vec::Zero(dim);
    v(0) = psi.beta;        // all spins down
    v(1L << 0) = psi.alpha; // A1 up

    // Encode: CNOT at A2 controlled by A1 being zero.
    apply_cnot(v, 0, 1, false);

    ProtocolTrace trace;

    // Transfer portion: evolve then swap Bob with memory i.
    for (int i = 1; i <= k; ++i) {
        v = evolve_full(transfer_sd, v, schedule.intervals[i - 1]);
        apply_swap(v, bob_bit, memory_bit(i));
    }
    trace.memory_after_transfer.reserve(k);
    for (int i = 1; i <= k; ++i)
        trace.memory_after_transfer.push_back(v(1L << memory_bit(i)));

    // Cooling: project every chain excitation away, renormalize.
    if (cooling) {
        const long chain_mask = ((1L << (n + 1)) - 1) & ~1L;  // bits 1..N
        double p_loss = 0.0;
        for (long s = 0; s < dim; ++s)
            if (s & chain_mask) p_loss += std::norm(v(s));
        trace.p_loss = p_loss;
        if (1.0 - p_loss <= 1e-15)
            throw std::domain_error("oracle_sim: cooling removed all amplitude");
        for (long s = 0; s < dim; ++s)
            if (s & chain_mask) v(s) = Complex{0.0, 0.0};
        v /= std::sqrt(1.0 - p_loss);
    }

    // Decode portion: evolve, CNOT at M_l controlled by Bob, measure M_l.
    double reach = cooling ? 1.0 - trace.p_loss : 1.0;
    for (int l = 1; l <= decode_steps; ++l) {
        v = evolve_full(decode_sd, v, schedule.intervals[l - 1]);
        apply_cnot(v, bob_bit, memory_bit(l), true);

        const long mbit = 1L << memory_bit(l);
        double p1 = 0.0;
        for (long s = 0; s < dim; ++s)
            if (s & mbit) p1 += std::norm(v(s));

        DecodeStepTrace step;
        step.p_success = p1;
        step.eta = reach * p1;
        if (p1 > 0.0) {
            const double scale = 1.0 / std::sqrt(p1);
            step.bob_alpha = v((1L << bob_bit) | mbit) * scale;
            step.bob_beta = v(mbit) * scale;
        } else {
            step.degenerate = true;
        }
        trace.decode.push_back(step);

        // Continue along the failure branch.
        for (long s = 0; s < dim; ++s)
            if (s & mbit) v(s) = Complex{0.0, 0.0};
        const double p_fail = 1.0 - p1;
        if (p_fail > 1e-15) v /= std::sqrt(p_fail);
        reach *= p_fail;
    }
    return trace;
}

std::string to_text(const ProtocolTrace& trace) {
    char buf[160];
    std::string out;
    for (std::size_t i = 0; i < trace.memory_after_transfer.size(); ++i) {
        const Complex m = trace.memory_after_transfer[i];
        std::snprintf(buf, sizeof(buf), "memory %zu: %+.12e %+.12e i\n", i + 1,
                      m.real(), m.imag());
        out += buf;
    }
    std::snprintf(buf, sizeof(buf), "p_loss: %.12e\n", trace.p_loss);
    out += buf;
    for (std::size_t i = 0; i < trace.decode.size(); ++i) {
        const auto& d = trace.decode[i];
        std::snprintf(buf, sizeof(buf),
                      "decode %zu: p=%.12e eta=%.12e bob=(%+.9e%+.9ei, "
                      "%+.9e%+.9ei)%s\n",
                      i + 1, d.p_success, d.eta, d.bob_alpha.real(),
                      d.bob_alpha.imag(), d.bob_beta.real(), d.bob_beta.imag(),
                      d.degenerate ? " degenerate" : "");
        out += buf;
    }
    return out;
}

namespace {

void track(EquivalenceResult& r, double dev, const std::string& where) {
    if (dev > r.max_deviation) {
        r.max_deviation = dev;
        r.worst_location = where;
    }
}

}  // namespace

EquivalenceResult equivalence_check(const ProtocolTrace& engine_trace,
                                    const ProtocolTrace& oracle_trace,
                                    double tol) {
    EquivalenceResult result;
    if (engine_trace.memory_after_transfer.size() !=
            oracle_trace.memory_after_transfer.size() ||
        engine_trace.decode.size() != oracle_trace.decode.size()) {
        result.pass = false;
        result.max_deviation = std::numeric_limits<double>::infinity();
        result.worst_location = "trace shape mismatch";
        return result;
    }
    for (std::size_t i = 0; i < engine_trace.memory_after_transfer.size(); ++i)
        track(result,
              std::abs(engine_trace.memory_after_transfer[i] -
                       oracle_trace.memory_after_transfer[i]),
              "memory amplitude " + std::to_string(i + 1));
    track(result, std::abs(engine_trace.p_loss - oracle_trace.p_loss),
          "cooling loss");
    for (std::size_t i = 0; i < engine_trace.decode.size(); ++i) {
        const auto& e = engine_trace.decode[i];
        const auto& o = oracle_trace.decode[i];
        const std::string tag = "decode step " + std::to_string(i + 1);
        track(result, std::abs(e.p_success - o.p_success),
              tag + " p_success");
        track(result, std::abs(e.eta - o.eta), tag + " eta");
        if (e.degenerate != o.degenerate) {
            result.pass = false;
            result.max_deviation = std::numeric_limits<double>::infinity();
            result.worst_location = tag + " degeneracy mismatch";
            return result;
        }
        if (!e.degenerate) {
            track(result, std::abs(e.bob_alpha - o.bob_alpha),
                  tag + " bob alpha");
            track(result, std::abs(e.bob_beta - o.bob_beta),
                  tag + " bob beta");
        }
    }
    result.pass = result.max_deviation <= tol;
    return result;
}

}  // namespace qst::oracle
