#include "stopctl/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "stopctl/analytic.hpp"
#include "stopctl/bounds.hpp"
#include "stopctl/model.hpp"
#include "stopctl/po_checker.hpp"
#include "stopctl/simulate.hpp"

namespace stopctl::cli {

namespace {

// Problem constants and output options shared by every subcommand.
struct RunConfig {
    double velocity = 20.0;
    double stop_time = 10.0;
    std::int64_t periods = 10;
    int substeps = 100;
    std::string format;
    std::string output;
    // check
    double output_bound_scale = 1.0;
    // sweep
    std::int64_t n_min = 1;
    std::int64_t n_max = 64;
    bool doubling = false;
};

std::string num(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

void add_problem_options(CLI::App* cmd, RunConfig& cfg, bool with_n, bool with_m) {
    cmd->add_option("--v", cfg.velocity, "initial velocity V [m/s]")->capture_default_str();
    cmd->add_option("--t-stop", cfg.stop_time, "stopping time T_stop [s]")->capture_default_str();
    if (with_n) {
        cmd->add_option("--n", cfg.periods, "number of hold periods N")->capture_default_str();
    }
    if (with_m) {
        cmd->add_option("--m", cfg.substeps, "integration substeps per hold period")->capture_default_str();
    }
    cmd->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"csv", "report"}));
    cmd->add_option("--output", cfg.output, "write to this file instead of standard output");
}

GridSpec grid_of(const RunConfig& cfg) {
    if (cfg.substeps < 1) {
        throw DomainError("--m must be at least 1");
    }
    return GridSpec{cfg.substeps};
}

bool wants_csv(const RunConfig& cfg, bool csv_by_default) {
    return cfg.format.empty() ? csv_by_default : cfg.format == "csv";
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
    const SystemParams p = make_params(cfg.velocity, cfg.stop_time, cfg.periods);
    const std::vector<std::pair<std::string, double>> rows = {
        {"V", p.initial_velocity()},
        {"T_stop", p.stop_time()},
        {"N", static_cast<double>(p.periods())},
        {"T", p.hold_period()},
        {"a", p.jerk()},
        {"a_D", p.discrete_jerk()},
        {"D", analytic::continuous_stop_distance(p)},
        {"D_D", analytic::discrete_stop_distance(p)},
        {"gap_exact", analytic::exact_final_gap(p)},
    };
    if (wants_csv(cfg, false)) {
        out << "quantity,value\n";
        for (const auto& [k, v] : rows) {
            out << k << ',' << num(v) << '\n';
        }
    } else {
        for (const auto& [k, v] : rows) {
            out << k << " = " << num(v) << '\n';
        }
    }
    return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
    const SystemParams p = make_params(cfg.velocity, cfg.stop_time, cfg.periods);
    const GridSpec grid = grid_of(cfg);
    const Trajectory cont = integrate(p, ControlSignal::linear_ramp(), grid);
    const Trajectory zoh = integrate(p, ControlSignal::staircase_zoh(), grid);
    const std::vector<Deviation> dev = deviation_series(cont, zoh);
    if (wants_csv(cfg, true)) {
        out << "t,x_cont,v_cont,x_zoh,v_zoh,abs_dx,abs_dv\n";
        for (std::size_t i = 0; i < dev.size(); ++i) {
            const State& c = cont.samples[i].state;
            const State& z = zoh.samples[i].state;
            out << num(dev[i].t) << ',' << num(c.x) << ',' << num(c.v) << ',' << num(z.x) << ',' << num(z.v) << ','
                << num(dev[i].abs_dx) << ',' << num(dev[i].abs_dv) << '\n';
        }
    } else {
        const bounds::LinfDeviation linf = bounds::linf_deviation(cont, zoh);
        out << "samples = " << cont.samples.size() << '\n'
            << "final_x_cont = " << num(cont.back().state.x) << '\n'
            << "final_v_cont = " << num(cont.back().state.v) << '\n'
            << "final_x_zoh = " << num(zoh.back().state.x) << '\n'
            << "final_v_zoh = " << num(zoh.back().state.v) << '\n'
            << "linf_dx = " << num(linf.x) << '\n'
            << "linf_dv = " << num(linf.v) << '\n';
    }
    return kExitOk;
}

int cmd_bound(const RunConfig& cfg, std::ostream& out) {
    const SystemParams p = make_params(cfg.velocity, cfg.stop_time, cfg.periods);
    const GridSpec grid = grid_of(cfg);
    const Trajectory cont = integrate(p, ControlSignal::linear_ramp(), grid);
    const Trajectory zoh = integrate(p, ControlSignal::staircase_zoh(), grid);
    const bounds::BoundReport report = bounds::bound_report(p, cont, zoh, grid);
    if (wants_csv(cfg, false)) {
        bounds::write_csv(out, report);
    } else {
        bounds::write_key_value(out, report);
    }
    return report.sound ? kExitOk : kExitCheckFailed;
}

int cmd_check(const RunConfig& cfg, std::ostream& out) {
    const SystemParams p = make_params(cfg.velocity, cfg.stop_time, cfg.periods);
    const GridSpec grid = grid_of(cfg);
    const po::Fragment cont = po::make_fragment(p, ControlSignal::linear_ramp(), grid);
    const po::Fragment zoh = po::make_fragment(p, ControlSignal::staircase_zoh(), grid);

    const double o_bound = bounds::gronwall_bound(p) * cfg.output_bound_scale;
    const po::RetrenchmentData data = po::train_retrenchment_data(p, grid, o_bound);
    const bool init_ok = po::check_init_po(cont.trajectory.front().state, zoh.trajectory.front().state, data.retrieve);
    const po::POResult retrenchment = po::check_retrenchment_po(cont, zoh, data);
    const po::Corroboration corr = po::corroboration(p);
    const po::POResult identity_refinement =
        po::check_refinement_po(cont, zoh, po::identity_relation(), po::any_inputs(), po::any_outputs());

    const bool ok = init_ok && retrenchment.passed() && corr.holds;
    if (wants_csv(cfg, false)) {
        po::write_witness_csv(out, retrenchment);
        out << "init,R," << (init_ok ? 1 : 0) << ",1," << (init_ok ? 1 : 0) << '\n';
        out << "corroboration,tstop_over_12_times_1_plus_1_over_n," << num(corr.lhs) << ',' << num(corr.rhs) << ','
            << (corr.holds ? 1 : 0) << '\n';
    } else {
        out << "parameters: V = " << num(p.initial_velocity()) << ", T_stop = " << num(p.stop_time())
            << ", N = " << p.periods() << ", m = " << grid.substeps_per_period << '\n';
        out << "initialization PO: " << (init_ok ? "pass" : "fail") << '\n';
        out << "retrenchment correctness PO ";
        po::write_report(out, retrenchment);
        out << "corroboration: " << num(corr.lhs) << " <= " << num(corr.rhs) << " : "
            << (corr.holds ? "holds" : "fails") << '\n';
        out << "refinement PO with identity retrieve relation (informational): "
            << po::to_string(identity_refinement.verdict) << '\n';
        out << "overall: " << (ok ? "pass" : "fail") << '\n';
    }
    return ok ? kExitOk : kExitCheckFailed;
}

struct SweepRow {
    std::int64_t n = 0;
    double hold_period = 0.0;
    double discrete_jerk = 0.0;
    double discrete_distance = 0.0;
    double gap = 0.0;
    double l2_gap = 0.0;
    double gronwall = 0.0;
    po::Verdict verdict = po::Verdict::fail_conclusion;
};

SweepRow sweep_row(double velocity, double stop_time, std::int64_t n, const GridSpec& grid) {
    const SystemParams p = make_params(velocity, stop_time, n);
    const po::Fragment cont = po::make_fragment(p, ControlSignal::linear_ramp(), grid);
    const po::Fragment zoh = po::make_fragment(p, ControlSignal::staircase_zoh(), grid);
    const po::POResult result = po::check_retrenchment_po(cont, zoh, po::train_retrenchment_data(p, grid));
    return SweepRow{n,
                    p.hold_period(),
                    p.discrete_jerk(),
                    analytic::discrete_stop_distance(p),
                    analytic::exact_final_gap(p),
                    bounds::l2_control_gap_numeric(cont.input, zoh.input, p, grid),
                    bounds::gronwall_bound(p),
                    result.verdict};
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
    if (cfg.n_min < 1 || cfg.n_max < cfg.n_min) {
        throw DomainError("--n-min must be at least 1 and not exceed --n-max");
    }
    make_params(cfg.velocity, cfg.stop_time, cfg.n_min);
    const GridSpec grid = grid_of(cfg);

    std::vector<std::int64_t> ns;
    for (std::int64_t n = cfg.n_min; n <= cfg.n_max; n = cfg.doubling ? n * 2 : n + 1) {
        ns.push_back(n);
    }

    // Rows are independent; workers fill their slot so output order is N order.
    std::vector<SweepRow> rows(ns.size());
    std::vector<std::exception_ptr> errors(ns.size());
    std::atomic<std::size_t> next{0};
    const std::size_t workers =
        std::min<std::size_t>(ns.size(), std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < ns.size(); i = next++) {
                try {
                    rows[i] = sweep_row(cfg.velocity, cfg.stop_time, ns[i], grid);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (std::thread& t : pool) {
        t.join();
    }
    for (const std::exception_ptr& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    bool all_pass = true;
    if (wants_csv(cfg, true)) {
        out << "N,T,a_D,D_D,gap_exact,l2_gap,gronwall_bound,po_verdict\n";
    } else {
        char header[160];
        std::snprintf(header, sizeof header, "%6s %14s %14s %14s %14s %14s %14s  %s\n", "N", "T", "a_D", "D_D",
                      "gap_exact", "l2_gap", "gronwall_bound", "po_verdict");
        out << header;
    }
    for (const SweepRow& r : rows) {
        all_pass = all_pass && r.verdict == po::Verdict::pass;
        if (wants_csv(cfg, true)) {
            out << r.n << ',' << num(r.hold_period) << ',' << num(r.discrete_jerk) << ',' << num(r.discrete_distance)
                << ',' << num(r.gap) << ',' << num(r.l2_gap) << ',' << num(r.gronwall) << ','
                << po::to_string(r.verdict) << '\n';
        } else {
            char line[200];
            std::snprintf(line, sizeof line, "%6lld %14.8g %14.8g %14.8g %14.8g %14.8g %14.8g  %s\n",
                          static_cast<long long>(r.n), r.hold_period, r.discrete_jerk, r.discrete_distance, r.gap,
                          r.l2_gap, r.gronwall, po::to_string(r.verdict).c_str());
            out << line;
        }
    }
    return all_pass ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Continuous vs zero-order-hold stopping control: simulation, deviation bounds and "
                 "retrenchment proof obligations",
                 "stopctl"};
    app.require_subcommand(1);
    RunConfig cfg;

    CLI::App* solve = app.add_subcommand("solve", "closed-form constants, stopping distances and exact gap");
    add_problem_options(solve, cfg, true, false);

    CLI::App* simulate = app.add_subcommand("simulate", "RK4 trajectories of both models");
    add_problem_options(simulate, cfg, true, true);

    CLI::App* bound = app.add_subcommand("bound", "deviation bound report");
    add_problem_options(bound, cfg, true, true);

    CLI::App* check = app.add_subcommand("check", "retrenchment PO and corroboration");
    add_problem_options(check, cfg, true, true);
    check->add_option("--o-bound-scale", cfg.output_bound_scale,
                      "multiply the output-relation bound (diagnostic; values < 1 tighten it)")
        ->capture_default_str();

    CLI::App* sweep = app.add_subcommand("sweep", "per-N table over a range of hold-period counts");
    add_problem_options(sweep, cfg, false, true);
    sweep->add_option("--n-min", cfg.n_min, "smallest N")->capture_default_str();
    sweep->add_option("--n-max", cfg.n_max, "largest N")->capture_default_str();
    sweep->add_flag("--doubling", cfg.doubling, "step N by doubling instead of by one");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    std::ofstream file;
    std::ostream* sink = &out;
    if (!cfg.output.empty()) {
        file.open(cfg.output, std::ios::binary | std::ios::trunc);
        if (!file) {
            err << "error: cannot open " << cfg.output << " for writing\n";
            return kExitUsage;
        }
        sink = &file;
    }

    try {
        if (solve->parsed()) {
            return cmd_solve(cfg, *sink);
        }
        if (simulate->parsed()) {
            return cmd_simulate(cfg, *sink);
        }
        if (bound->parsed()) {
            return cmd_bound(cfg, *sink);
        }
        if (check->parsed()) {
            return cmd_check(cfg, *sink);
        }
        return cmd_sweep(cfg, *sink);
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NumericBlowup& e) {
        err << "error: " << e.what() << '\n';
        return kExitCheckFailed;
    }
}

}  // namespace stopctl::cli
