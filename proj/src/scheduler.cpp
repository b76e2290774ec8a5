#include "qst/scheduler.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "qst/protocol_engine.hpp"

namespace qst {

std::vector<double> Schedule::cumulative() const {
    std::vector<double> t(intervals.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        acc += intervals[i];
        t[i] = acc;
    }
    return t;
}

double Schedule::total_time() const {
    double acc = 0.0;
    for (double tau : intervals) acc += tau;
    return acc;
}

void Schedule::validate() const {
    for (double tau : intervals)
        if (!(tau > 0.0))
            throw std::invalid_argument(
                "Schedule: intervals must be strictly positive");
}

std::vector<double> EtaProfile::cumulative() const {
    std::vector<double> c(eta.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < eta.size(); ++i) {
        acc += eta[i];
        c[i] = acc;
    }
    return c;
}

double EtaProfile::total() const {
    double acc = 0.0;
    for (double e : eta) acc += e;
    return acc;
}

double default_window(const ChainSpec& spec) {
    return 6.0 * spec.length / spec.mean_coupling();
}

namespace {

// Probability mass arriving at Bob after evolving the current chain
// distribution for time t.  `modes` is V^T v; one evaluation costs O(N).
class ArrivalProbability {
public:
    ArrivalProbability(const SpectralData& sd, const Eigen::VectorXcd& v)
        : sd_(sd),
          modes_(sd.eigenvectors.transpose().cast<Complex>() * v) {}

    double operator()(double t) const {
        Complex amp{0.0, 0.0};
        const int n = sd_.size();
        for (int k = 0; k < n; ++k)
            amp += sd_.eigenvectors(n - 1, k) * modes_(k) *
                   std::polar(1.0, -sd_.eigenvalues(k) * t);
        return std::norm(amp);
    }

private:
    const SpectralData& sd_;
    Eigen::VectorXcd modes_;
};

// Golden-section maximization over [lo, hi] to a relative width tolerance.
double golden_section_max(const ArrivalProbability& f, double lo, double hi,
                          double rel_tol) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c), fd = f(d);
    while ((b - a) > rel_tol * std::max(1.0, std::abs(b))) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

struct StepChoice {
    double tau = 0.0;
    double eta = 0.0;
};

// One greedy step: grid search over (0, window], golden-section refinement
// of every competitive local-max basin, smallest-τ tie-break among refined
// peaks of equal height.  Refining all near-top basins keeps the choice
// stable against grid-phase artifacts (a coarse grid can sample a later,
// equally tall peak closer to its top than an earlier one).
StepChoice choose_interval(const SpectralData& sd, const Eigen::VectorXcd& v,
                           const SchedulerOptions& opts, double window) {
    const ArrivalProbability prob(sd, v);
    const int res = opts.resolution;
    const double dt = window / res;

    std::vector<double> p(res);
    double grid_max = -1.0;
    for (int g = 0; g < res; ++g) {
        p[g] = prob(dt * (g + 1));
        grid_max = std::max(grid_max, p[g]);
    }

    const double slack = std::max(0.05 * grid_max, 1e-6);
    StepChoice best;
    best.eta = -1.0;
    auto consider = [&](int g) {
        const double lo = dt * g;                     // neighbor below
        const double hi = dt * std::min(g + 2, res);  // neighbor above
        const double tau = golden_section_max(prob, lo, hi, opts.refine_rel_tol);
        double eta = prob(tau);
        double tau_pick = tau;
        if (eta < p[g]) {  // refinement must not lose to its grid point
            eta = p[g];
            tau_pick = dt * (g + 1);
        }
        if (eta > best.eta + 1e-9) best = StepChoice{tau_pick, eta};
    };
    for (int g = 0; g < res; ++g) {
        if (p[g] < grid_max - slack) continue;
        const bool rises = g == 0 || p[g] >= p[g - 1];
        const bool falls = g == res - 1 || p[g] >= p[g + 1];
        if (rises && falls) consider(g);
    }
    if (best.eta < 0.0) consider(res - 1);  // monotone rise up to the edge

    if (std::abs(p[res - 1] - grid_max) < 1e-15 && res > 1 &&
        p[res - 1] > p[res - 2])
        std::cerr << "greedy_optimize_schedule: warning: best arrival sits at "
                     "the window edge; consider a larger --tau-window\n";
    return best;
}

}  // namespace

Schedule greedy_optimize_schedule(const ChainSpec& spec, int j_max,
                                  const SchedulerOptions& opts) {
    spec.validate();
    if (j_max < 1)
        throw std::invalid_argument("greedy_optimize_schedule: j_max >= 1");
    if (opts.resolution < 100)
        throw std::invalid_argument(
            "greedy_optimize_schedule: resolution must be >= 100");
    const double window = opts.window > 0.0 ? opts.window : default_window(spec);

    const SpectralData sd = spectral_decompose(spec);
    const int n = spec.length;
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
    v(0) = Complex{1.0, 0.0};

    Schedule schedule;
    schedule.intervals.reserve(j_max);
    for (int i = 0; i < j_max; ++i) {
        const StepChoice pick = choose_interval(sd, v, opts, window);
        schedule.intervals.push_back(pick.tau);
        v = propagate(sd, v, pick.tau);
        v(n - 1) = Complex{0.0, 0.0};  // swap removes Bob's amplitude
    }
    return schedule;
}

EtaProfile eta_profile(const ChainSpec& spec, const Schedule& schedule) {
    schedule.validate();
    const SpectralData sd = spectral_decompose(spec);
    Topology topo{spec.length, std::max(schedule.steps(), 1)};
    SystemState state = init_state(QubitState{{0.0, 0.0}, {1.0, 0.0}}, topo);
    encode_cnot(state);
    set_switch(state, SwitchConfig::A2Connected);
    transfer_run(state, sd, schedule);

    EtaProfile profile;
    profile.eta.reserve(schedule.steps());
    for (int l = 1; l <= schedule.steps(); ++l)
        profile.eta.push_back(std::norm(state.memory(l)));
    return profile;
}

MemoryBudget memories_for_target(const ChainSpec& spec, double eta_target,
                                 int j_cap, const SchedulerOptions& opts) {
    if (!(eta_target > 0.0 && eta_target < 1.0))
        throw std::invalid_argument(
            "memories_for_target: target must be in (0,1)");
    if (j_cap < 1)
        throw std::invalid_argument("memories_for_target: j_cap >= 1");
    spec.validate();
    if (opts.resolution < 100)
        throw std::invalid_argument(
            "memories_for_target: resolution must be >= 100");
    const double window = opts.window > 0.0 ? opts.window : default_window(spec);

    const SpectralData sd = spectral_decompose(spec);
    const int n = spec.length;
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
    v(0) = Complex{1.0, 0.0};

    MemoryBudget budget;
    double cumulative = 0.0;
    for (int i = 0; i < j_cap; ++i) {
        const StepChoice pick = choose_interval(sd, v, opts, window);
        budget.schedule.intervals.push_back(pick.tau);
        budget.profile.eta.push_back(pick.eta);
        cumulative += pick.eta;
        v = propagate(sd, v, pick.tau);
        v(n - 1) = Complex{0.0, 0.0};
        if (cumulative >= eta_target) {
            budget.memories = i + 1;
            budget.reached = true;
            return budget;
        }
    }
    budget.memories = j_cap;
    budget.reached = false;
    return budget;
}

TimingReport average_decoding_time(const EtaProfile& profile,
                                   const Schedule& schedule,
                                   double j_in_kelvin) {
    if (profile.eta.size() != schedule.intervals.size())
        throw std::invalid_argument(
            "average_decoding_time: profile/schedule length mismatch");
    if (schedule.steps() == 0)
        throw std::invalid_argument("average_decoding_time: empty schedule");
    const auto t = schedule.cumulative();
    const int j = schedule.steps();
    double t_bar = 0.0;
    double eta_head = 0.0;  // Σ_{i<j} η_i
    for (int i = 0; i + 1 < j; ++i) {
        t_bar += profile.eta[i] * t[i];
        eta_head += profile.eta[i];
    }
    t_bar += (1.0 - eta_head) * t[j - 1];

    TimingReport report;
    report.average_decode_time = t_bar;
    report.full_decode_time = t[j - 1];
    report.ratio = t_bar / t[j - 1];
    if (j_in_kelvin > 0.0) {
        report.average_decode_seconds = to_physical_units(t_bar, j_in_kelvin);
        report.full_decode_seconds =
            to_physical_units(t[j - 1], j_in_kelvin);
    }
    return report;
}

std::vector<Eta1Point> max_eta1_curve(const std::vector<int>& lengths,
                                      const SchedulerOptions& opts) {
    std::vector<Eta1Point> curve;
    curve.reserve(lengths.size());
    for (int n : lengths) {
        const ChainSpec spec = ChainSpec::uniform(n);
        const SpectralData sd = spectral_decompose(spec);
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
        v(0) = Complex{1.0, 0.0};
        const double window =
            opts.window > 0.0 ? opts.window : default_window(spec);
        const StepChoice pick = choose_interval(sd, v, opts, window);
        curve.push_back(Eta1Point{n, pick.eta, pick.tau});
    }
    return curve;
}

double to_physical_units(double t_natural, double j_in_kelvin) {
    if (!(j_in_kelvin > 0.0))
        throw std::invalid_argument("to_physical_units: J must be > 0 kelvin");
    return t_natural * kHbarJouleSeconds /
           (kBoltzmannJoulePerKelvin * j_in_kelvin);
}

}  // namespace qst
