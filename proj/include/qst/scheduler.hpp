// scheduler.hpp — evolution-interval optimization and timing analytics.
//
// The transfer protocol stores amplitude in one memory per step; the step
// intervals τ_i are free parameters.  greedy_optimize_schedule picks each
// τ_i to maximize that step's success probability η_i = |f_N^(i)|² (the
// probability mass arriving at Bob given all earlier swaps), holding earlier
// choices fixed: grid search over (0, window] followed by golden-section
// refinement.  Ties are broken toward the smallest τ to minimize total time.
//
// Conclusive decoding stops at the first successful measurement, so its
// expected cost is the average decoding time
//   T̄ = Σ_{i<j} η_i·t_i + (1 − Σ_{i<j} η_i)·t_j ,
// compared against t_j, the cost of time-reversed decoding.

#pragma once

#include <optional>
#include <vector>

#include "qst/chain_model.hpp"

namespace qst {

/// Ordered evolution intervals τ_1..τ_j, all strictly positive.
struct Schedule {
    std::vector<double> intervals;

    int steps() const { return static_cast<int>(intervals.size()); }

    /// Cumulative times t_i = Σ_{r<=i} τ_r (strictly increasing).
    std::vector<double> cumulative() const;

    double total_time() const;

    void validate() const;
};

/// Per-step and cumulative success probabilities.
struct EtaProfile {
    std::vector<double> eta;   // η_i, each in [0,1]

    std::vector<double> cumulative() const;
    double total() const;      // Σ η_i  (≤ 1)
};

/// Decode-time analytics in natural units plus optional physical rendering.
struct TimingReport {
    double average_decode_time = 0.0;   // T̄
    double full_decode_time = 0.0;      // t_j (time-reversed decoding cost)
    double ratio = 0.0;                 // T̄ / t_j

    std::optional<double> average_decode_seconds;
    std::optional<double> full_decode_seconds;
};

struct SchedulerOptions {
    double window = 0.0;      // 0 → default_window(spec)
    int resolution = 2000;    // grid points over (0, window], >= 100
    double refine_rel_tol = 1e-6;
};

/// Default search window: several traversal times of the chain,
/// 6·N / mean coupling.
double default_window(const ChainSpec& spec);

/// Greedy per-step interval choice.  Emits a warning to stderr and keeps the
/// best grid point if the window contains no interior arrival peak.
Schedule greedy_optimize_schedule(const ChainSpec& spec, int j_max,
                                  const SchedulerOptions& opts = {});

/// η_i per step for a given schedule, extracted by running the protocol
/// engine with basis input (α,β) = (0,1): η_i = |m_i|² after the transfer.
EtaProfile eta_profile(const ChainSpec& spec, const Schedule& schedule);

struct MemoryBudget {
    int memories = 0;          // smallest j with cumulative η >= target
    bool reached = false;      // false → target not reached within j_cap
    Schedule schedule;         // greedy schedule of length memories (or j_cap)
    EtaProfile profile;
};

/// Smallest greedy step count reaching the target cumulative η.
MemoryBudget memories_for_target(const ChainSpec& spec, double eta_target,
                                 int j_cap, const SchedulerOptions& opts = {});

/// Exact evaluation of T̄ from a matched profile/schedule pair.
TimingReport average_decoding_time(const EtaProfile& profile,
                                   const Schedule& schedule,
                                   double j_in_kelvin = 0.0);

struct Eta1Point {
    int length = 0;
    double eta1 = 0.0;
    double tau = 0.0;
};

/// Greedy first-step optimum per chain length (maximal η₁ curve).
std::vector<Eta1Point> max_eta1_curve(const std::vector<int>& lengths,
                                      const SchedulerOptions& opts = {});

/// CODATA constants used for physical-unit rendering.
inline constexpr double kHbarJouleSeconds = 1.054571817e-34;
inline constexpr double kBoltzmannJoulePerKelvin = 1.380649e-23;

/// Seconds per natural time unit when the hopping element equals
/// k_B · J_in_kelvin:  t_seconds = t_natural · ħ / (k_B · J).
double to_physical_units(double t_natural, double j_in_kelvin);

}  // namespace qst
