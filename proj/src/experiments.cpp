#include "qst/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "qst/protocol_engine.hpp"
#include "qst/verification.hpp"

namespace qst {

namespace {

using nlohmann::json;

json config_json(const RunConfig& c) {
    return json{{"command", c.command},
                {"n", c.n},
                {"n_lo", c.n_lo},
                {"n_hi", c.n_hi},
                {"n_list", c.n_list},
                {"steps", c.steps},
                {"eta_target", c.eta_target},
                {"delta", c.delta},
                {"seeds", c.seeds},
                {"seed", c.seed},
                {"tau_window", c.tau_window},
                {"grid", c.grid},
                {"j_kelvin", c.j_kelvin},
                {"cooling", c.cooling},
                {"out_dir", c.out_dir}};
}

json base_manifest(const RunConfig& c) {
    const auto now = std::chrono::system_clock::now();
    const auto stamp =
        std::chrono::duration_cast<std::chrono::milliseconds>(
            now.time_since_epoch())
            .count();
    return json{{"version", kVersion},
                {"command", c.command},
                {"config", config_json(c)},
                {"seed", c.seed},
                {"wall_clock_unix_ms", stamp}};
}

// Per-point sub-seed for sweeps: decorrelated but reproducible.
std::uint64_t sub_seed(std::uint64_t seed, int index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic order-independent parallel map over [0, count).
void parallel_for_index(int count, const std::function<void(int)>& fn) {
    const unsigned workers =
        std::min<unsigned>(std::thread::hardware_concurrency(),
                           static_cast<unsigned>(count));
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1))
                fn(i);
        });
    for (auto& t : pool) t.join();
}

std::string fmt_int(long x) { return std::to_string(x); }

double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double std_of(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean_of(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

}  // namespace

void RunConfig::validate() const {
    if (n < 2) throw std::invalid_argument("config: --n must be >= 2");
    if (n_lo < 2 || n_hi < n_lo)
        throw std::invalid_argument("config: bad --n-range");
    for (int len : n_list)
        if (len < 2) throw std::invalid_argument("config: n values must be >= 2");
    if (steps < 1) throw std::invalid_argument("config: --steps must be >= 1");
    if (!(eta_target > 0.0 && eta_target < 1.0))
        throw std::invalid_argument("config: --eta-target must be in (0,1)");
    if (delta < 0.0 || delta >= 1.0)
        throw std::invalid_argument("config: --delta must be in [0,1)");
    if (seeds < 1) throw std::invalid_argument("config: --seeds must be >= 1");
    if (tau_window < 0.0)
        throw std::invalid_argument("config: --tau-window must be >= 0");
    if (grid < 100) throw std::invalid_argument("config: --grid must be >= 100");
    if (j_kelvin < 0.0)
        throw std::invalid_argument("config: --j-units-kelvin must be >= 0");
    if (out_dir.empty()) throw std::invalid_argument("config: empty --out");
}

SchedulerOptions RunConfig::scheduler_options() const {
    SchedulerOptions opts;
    opts.window = tau_window;
    opts.resolution = grid;
    return opts;
}

void ResultTable::add_row(std::vector<std::string> row) {
    if (row.size() != header.size())
        throw std::logic_error("ResultTable: row width mismatch");
    rows.push_back(std::move(row));
}

std::string ResultTable::to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out += ',';
        out += header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += row[i];
        }
        out += '\n';
    }
    return out;
}

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

CommandResult cmd_fig2(const RunConfig& config) {
    config.validate();
    std::vector<int> lengths;
    for (int n = config.n_lo; n <= config.n_hi; ++n) lengths.push_back(n);
    const auto curve = max_eta1_curve(lengths, config.scheduler_options());

    CommandResult result;
    result.table.header = {"N", "eta1_max", "tau_opt"};
    for (const auto& point : curve)
        result.table.add_row({fmt_int(point.length), format_number(point.eta1),
                              format_number(point.tau)});

    json manifest = base_manifest(config);
    manifest["rows"] = curve.size();
    result.manifest_json = manifest.dump(2);
    result.summary.push_back("fig2: max eta1 over N in [" +
                             std::to_string(config.n_lo) + "," +
                             std::to_string(config.n_hi) + "], " +
                             std::to_string(curve.size()) + " rows");
    return result;
}

CommandResult cmd_fig3(const RunConfig& config) {
    config.validate();
    CommandResult result;
    result.table.header = {"N", "step", "tau_i", "t_i", "eta_i", "eta_cum"};

    for (int n : config.n_list) {
        const ChainSpec spec = ChainSpec::uniform(n);
        const Schedule schedule = greedy_optimize_schedule(
            spec, config.steps, config.scheduler_options());
        const EtaProfile profile = eta_profile(spec, schedule);
        const auto times = schedule.cumulative();
        const auto cum = profile.cumulative();
        for (int i = 0; i < schedule.steps(); ++i)
            result.table.add_row({fmt_int(n), fmt_int(i + 1),
                                  format_number(schedule.intervals[i]),
                                  format_number(times[i]),
                                  format_number(profile.eta[i]),
                                  format_number(cum[i])});
        result.summary.push_back(
            "fig3: N=" + std::to_string(n) + " cumulative eta after " +
            std::to_string(config.steps) + " steps = " +
            format_number(profile.total()));
    }
    json manifest = base_manifest(config);
    result.manifest_json = manifest.dump(2);
    return result;
}

CommandResult cmd_example5(const RunConfig& config) {
    config.validate();
    const double j_kelvin = config.j_kelvin > 0.0 ? config.j_kelvin : 20.0;
    const ChainSpec spec = ChainSpec::uniform(config.n);
    const int j_cap = config.steps;

    const MemoryBudget budget = memories_for_target(
        spec, config.eta_target, j_cap, config.scheduler_options());
    const TimingReport timing =
        average_decoding_time(budget.profile, budget.schedule, j_kelvin);

    // Full engine pipeline at the chosen schedule, generic payload.
    const SpectralData sd = spectral_decompose(spec);
    Topology topo{spec.length, budget.schedule.steps()};
    SystemState state = init_state(QubitState{{0.6, 0.0}, {0.8, 0.0}}, topo);
    encode_cnot(state);
    set_switch(state, SwitchConfig::A2Connected);
    transfer_run(state, sd, budget.schedule);
    double p_loss = 0.0;
    if (config.cooling) p_loss = cool_chain(state);
    set_switch(state, SwitchConfig::A1Connected);
    const DecodeReport decode =
        decode_run(state, sd, budget.schedule, 1.0 - p_loss);

    CommandResult result;
    result.table.header = {"N",       "step",   "tau_i",     "t_i", "eta_i",
                           "eta_cum", "t_i_ns", "eta_decode"};
    const auto times = budget.schedule.cumulative();
    const auto cum = budget.profile.cumulative();
    for (int i = 0; i < budget.schedule.steps(); ++i)
        result.table.add_row(
            {fmt_int(config.n), fmt_int(i + 1),
             format_number(budget.schedule.intervals[i]),
             format_number(times[i]), format_number(budget.profile.eta[i]),
             format_number(cum[i]),
             format_number(to_physical_units(times[i], j_kelvin) * 1e9),
             format_number(decode.steps[i].eta)});

    const double t_j_ns = *timing.full_decode_seconds * 1e9;
    const double t_bar_ns = *timing.average_decode_seconds * 1e9;
    double fidelity_min = 1.0;
    for (const auto& step : decode.steps)
        if (step.fidelity_on_success)
            fidelity_min = std::min(fidelity_min, *step.fidelity_on_success);

    json manifest = base_manifest(config);
    manifest["summary"] = {
        {"n", config.n},
        {"j_kelvin", j_kelvin},
        {"eta_target", config.eta_target},
        {"memories", budget.memories},
        {"target_reached", budget.reached},
        {"eta_cumulative", budget.profile.total()},
        {"t_j_natural", timing.full_decode_time},
        {"t_bar_natural", timing.average_decode_time},
        {"t_j_ns", t_j_ns},
        {"t_bar_ns", t_bar_ns},
        {"ratio", timing.ratio},
        {"p_loss", p_loss},
        {"fidelity_min", fidelity_min}};
    result.manifest_json = manifest.dump(2);

    result.summary.push_back("example5: N=" + std::to_string(config.n) +
                             ", J=" + format_number(j_kelvin) + " K");
    result.summary.push_back(
        "  memories for eta >= " + format_number(config.eta_target) + ": " +
        std::to_string(budget.memories) +
        (budget.reached ? "" : " (target not reached)"));
    result.summary.push_back("  eta cumulative = " +
                             format_number(budget.profile.total()));
    result.summary.push_back("  t_j  = " + format_number(timing.full_decode_time) +
                             " (" + format_number(t_j_ns) + " ns)");
    result.summary.push_back("  Tbar = " +
                             format_number(timing.average_decode_time) + " (" +
                             format_number(t_bar_ns) + " ns)");
    result.summary.push_back("  Tbar/t_j = 1/" +
                             format_number(1.0 / timing.ratio));
    result.summary.push_back("  cooling loss = " + format_number(p_loss) +
                             ", min success fidelity = " +
                             format_number(fidelity_min));
    result.pass = budget.reached;
    return result;
}

CommandResult cmd_disorder_sweep(const RunConfig& config) {
    config.validate();
    const int j_cap = std::max(config.steps, 1);

    struct PointResult {
        std::uint64_t seed = 0;
        int memories = 0;
        bool reached = false;
        double eta_cum = 0.0;
        double t_total = 0.0;
        double t_bar = 0.0;
        double p_loss = 0.0;
        double fidelity_min = 1.0;
    };
    std::vector<PointResult> points(config.seeds);

    parallel_for_index(config.seeds, [&](int i) {
        PointResult& p = points[i];
        p.seed = sub_seed(config.seed, i);
        const DisorderModel dm{1.0, config.delta, p.seed};
        const ChainSpec spec = sample_random_chain(dm, config.n);
        const MemoryBudget budget = memories_for_target(
            spec, config.eta_target, j_cap, config.scheduler_options());
        p.memories = budget.memories;
        p.reached = budget.reached;
        p.eta_cum = budget.profile.total();
        const TimingReport timing = average_decoding_time(
            budget.profile, budget.schedule, config.j_kelvin);
        p.t_total = timing.full_decode_time;
        p.t_bar = timing.average_decode_time;

        const SpectralData sd = spectral_decompose(spec);
        Topology topo{spec.length, budget.schedule.steps()};
        SystemState state =
            init_state(random_qubit(sub_seed(p.seed, 1)), topo);
        encode_cnot(state);
        set_switch(state, SwitchConfig::A2Connected);
        transfer_run(state, sd, budget.schedule);
        if (config.cooling) p.p_loss = cool_chain(state);
        set_switch(state, SwitchConfig::A1Connected);
        const DecodeReport decode =
            decode_run(state, sd, budget.schedule, 1.0 - p.p_loss);
        for (const auto& step : decode.steps)
            if (step.fidelity_on_success)
                p.fidelity_min =
                    std::min(p.fidelity_min, *step.fidelity_on_success);
    });

    CommandResult result;
    result.table.header = {"point",   "seed",    "N",        "delta",
                           "memories", "reached", "eta_cum",  "t_total",
                           "t_bar",    "t_total_ns", "t_bar_ns", "p_loss",
                           "fidelity_min"};
    const bool physical = config.j_kelvin > 0.0;
    auto in_ns = [&](double t_natural) {
        return physical
                   ? format_number(to_physical_units(t_natural,
                                                     config.j_kelvin) * 1e9)
                   : std::string{};
    };
    std::vector<double> mem_col, eta_col, tt_col, tb_col;
    for (int i = 0; i < config.seeds; ++i) {
        const auto& p = points[i];
        result.table.add_row(
            {fmt_int(i), std::to_string(p.seed), fmt_int(config.n),
             format_number(config.delta), fmt_int(p.memories),
             fmt_int(p.reached ? 1 : 0), format_number(p.eta_cum),
             format_number(p.t_total), format_number(p.t_bar),
             in_ns(p.t_total), in_ns(p.t_bar), format_number(p.p_loss),
             format_number(p.fidelity_min)});
        mem_col.push_back(p.memories);
        eta_col.push_back(p.eta_cum);
        tt_col.push_back(p.t_total);
        tb_col.push_back(p.t_bar);
    }
    auto stat_row = [&](const char* tag, double (*f)(const std::vector<double>&))
        -> std::vector<std::string> {
        return {tag,
                "",
                fmt_int(config.n),
                format_number(config.delta),
                format_number(f(mem_col)),
                "",
                format_number(f(eta_col)),
                format_number(f(tt_col)),
                format_number(f(tb_col)),
                in_ns(f(tt_col)),
                in_ns(f(tb_col)),
                "",
                ""};
    };
    result.table.add_row(stat_row("mean", mean_of));
    result.table.add_row(stat_row("std", std_of));

    // Conclusiveness holds per run whenever cooling is on.
    bool fidelity_ok = true;
    double worst_fidelity = 1.0;
    for (const auto& p : points) {
        worst_fidelity = std::min(worst_fidelity, p.fidelity_min);
        if (config.cooling && std::abs(p.fidelity_min - 1.0) > 1e-9)
            fidelity_ok = false;
    }

    json manifest = base_manifest(config);
    manifest["summary"] = {{"memories_mean", mean_of(mem_col)},
                           {"memories_std", std_of(mem_col)},
                           {"t_bar_mean", mean_of(tb_col)},
                           {"t_bar_std", std_of(tb_col)},
                           {"fidelity_min", worst_fidelity},
                           {"fidelity_ok", fidelity_ok}};
    result.manifest_json = manifest.dump(2);

    result.summary.push_back(
        "sweep: N=" + std::to_string(config.n) + " delta=" +
        format_number(config.delta) + " seeds=" + std::to_string(config.seeds));
    result.summary.push_back("  memories mean=" + format_number(mean_of(mem_col)) +
                             " std=" + format_number(std_of(mem_col)));
    result.summary.push_back("  t_bar mean=" + format_number(mean_of(tb_col)) +
                             " std=" + format_number(std_of(tb_col)));
    result.summary.push_back("  min success fidelity = " +
                             format_number(worst_fidelity));
    if (!fidelity_ok)
        result.summary.push_back("  FAIL: conclusiveness fidelity deviated");
    result.pass = fidelity_ok;
    return result;
}

CommandResult cmd_verify(const RunConfig& config) {
    config.validate();
    CommandResult result;
    result.table.header = {"check", "trials", "max_deviation", "tolerance",
                           "pass"};
    result.pass = true;

    auto record = [&](const std::string& name, long trials, double dev,
                      double tol, bool pass) {
        result.table.add_row({name, fmt_int(trials), format_number(dev),
                              format_number(tol), pass ? "1" : "0"});
        result.summary.push_back(std::string(pass ? "[PASS] " : "[FAIL] ") +
                                 name + ": max deviation " +
                                 format_number(dev) + " (tol " +
                                 format_number(tol) + ")");
        result.pass = result.pass && pass;
    };

    const auto equiv = oracle_equivalence_suite(50, config.seed, 1e-10);
    record("oracle_equivalence", equiv.trials, equiv.max_deviation, 1e-10,
           equiv.pass);

    const auto conc =
        conclusiveness_suite(100, 20, 0.1, sub_seed(config.seed, 2), 1e-12,
                             1e-9);
    record("conclusiveness_spread", conc.chains * conc.inputs,
           conc.max_probability_spread, 1e-12,
           conc.max_probability_spread < 1e-12);
    record("conclusiveness_fidelity", conc.chains * conc.inputs,
           conc.max_fidelity_error, 1e-9, conc.max_fidelity_error < 1e-9);

    const DisorderModel dm{1.0, 0.2, sub_seed(config.seed, 3)};
    const auto unit =
        unitarity_check(sample_random_chain(dm, 9), 25, 40.0, 1e-10);
    record("propagator_unitarity", 25, unit.max_deviation, 1e-10, unit.pass);

    const auto closed = closed_form_check(20, 40, 1e-10);
    record("uniform_closed_form", 19 * 40, closed.max_deviation, 1e-10,
           closed.pass);

    json manifest = base_manifest(config);
    manifest["pass"] = result.pass;
    result.manifest_json = manifest.dump(2);
    return result;
}

OutputPaths write_outputs(const CommandResult& result,
                          const RunConfig& config) {
    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    OutputPaths paths;
    paths.csv = (fs::path(config.out_dir) / (config.command + ".csv")).string();
    paths.manifest =
        (fs::path(config.out_dir) / (config.command + "_manifest.json"))
            .string();
    std::ofstream csv(paths.csv, std::ios::binary);
    csv << result.table.to_csv();
    std::ofstream manifest(paths.manifest, std::ios::binary);
    manifest << result.manifest_json << '\n';
    if (!csv || !manifest)
        throw std::runtime_error("write_outputs: failed writing to " +
                                 config.out_dir);
    return paths;
}

int run_command(const RunConfig& config) {
    CommandResult result;
    if (config.command == "fig2")
        result = cmd_fig2(config);
    else if (config.command == "fig3")
        result = cmd_fig3(config);
    else if (config.command == "example5")
        result = cmd_example5(config);
    else if (config.command == "sweep")
        result = cmd_disorder_sweep(config);
    else if (config.command == "verify")
        result = cmd_verify(config);
    else
        throw std::invalid_argument("unknown command " + config.command);

    const OutputPaths paths = write_outputs(result, config);
    for (const auto& line : result.summary) std::cout << line << '\n';
    std::cout << "wrote " << paths.csv << " and " << paths.manifest << '\n';
    return result.pass ? 0 : 1;
}

}  // namespace qst
