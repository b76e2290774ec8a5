// Test-only reference evaluator, kept independent of the engine's state
// propagation path.
//
// stored_amplitude_nested_sum computes the amplitude deposited in memory l
// after a transfer schedule by the literal nested sum
//   f_N^(l) = Σ_{m_1=1..N-1} … Σ_{m_{l-1}=1..N-1}
//             f_{m_1,1}(τ_1) · f_{m_2,m_1}(τ_2) · … · f_{N,m_{l-1}}(τ_l),
// enumerating every intermediate-site tuple explicitly (each hop before the
// last avoids Bob's site, whose amplitude the swap removed; the final hop
// lands on Bob).  Exponential in l; intended for the small instances the
// tests use.

#pragma once

#include <vector>

#include "qst/chain_model.hpp"
#include "qst/scheduler.hpp"

namespace qst::testref {

inline Complex stored_amplitude_nested_sum(const SpectralData& sd,
                                           const Schedule& schedule, int l) {
    const int n = sd.size();
    std::vector<int> sites(l > 1 ? l - 1 : 0, 1);  // m_1 .. m_{l-1}
    Complex total{0.0, 0.0};
    while (true) {
        Complex term{1.0, 0.0};
        int from = 1;
        for (int step = 1; step <= l; ++step) {
            const int to = (step == l) ? n : sites[step - 1];
            term *= propagator_amplitude(sd, to, from,
                                         schedule.intervals[step - 1]);
            from = to;
        }
        total += term;

        // Odometer over the intermediate sites, each running 1..N-1.
        std::size_t digit = 0;
        while (digit < sites.size()) {
            if (++sites[digit] <= n - 1) break;
            sites[digit] = 1;
            ++digit;
        }
        if (digit == sites.size()) break;
    }
    return total;
}

}  // namespace qst::testref
