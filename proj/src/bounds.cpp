#include "stopctl/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace stopctl::bounds {

double k2_constant(const LipschitzData& lip, double stop_time) {
    if (!(lip.k_f >= 0.0) || !(lip.k_u >= 0.0)) {
        throw DomainError("Lipschitz constants must be non-negative");
    }
    if (!std::isfinite(stop_time) || stop_time < 0.0) {
        throw DomainError("stop time must be non-negative and finite");
    }
    const double input_norm = lip.k_u * std::sqrt(stop_time);
    if (input_norm == 0.0) {
        return 0.0;
    }
    return std::exp(lip.k_f_total(stop_time)) * input_norm;
}

double staircase_gap_bound(const SystemParams& params) {
    return params.discrete_jerk() * params.hold_period();
}

double l2_control_gap_bound(const SystemParams& params) {
    return staircase_gap_bound(params) * std::sqrt(params.stop_time());
}

double l2_control_gap_numeric(const ControlSignal& a, const ControlSignal& b, const SystemParams& params,
                              const GridSpec& grid) {
    std::vector<double> times = sample_times(params, grid, a);
    const std::vector<double> times_b = sample_times(params, grid, b);
    if (times != times_b) {
        // Union of both grids so every breakpoint of either signal is a node.
        std::vector<double> merged;
        std::merge(times.begin(), times.end(), times_b.begin(), times_b.end(), std::back_inserter(merged));
        merged.erase(std::unique(merged.begin(), merged.end(),
                                 [](double x, double y) {
                                     return std::abs(x - y) <=
                                            kTimeSnapTolerance * std::max(1.0, std::max(std::abs(x), std::abs(y)));
                                 }),
                     merged.end());
        times = std::move(merged);
    }
    double integral = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double t0 = times[i - 1];
        const double t1 = times[i];
        const double d0 = eval_control_right(a, params, t0) - eval_control_right(b, params, t0);
        const double d1 = eval_control(a, params, t1) - eval_control(b, params, t1);
        integral += 0.5 * (t1 - t0) * (d0 * d0 + d1 * d1);
    }
    return std::sqrt(integral);
}

double gronwall_bound(const SystemParams& params) {
    const double Ts = params.stop_time();
    return std::exp(Ts) * params.discrete_jerk() * params.hold_period() * Ts;
}

LinfDeviation linf_deviation(const Trajectory& a, const Trajectory& b) {
    LinfDeviation out;
    for (const Deviation& d : deviation_series(a, b)) {
        out.x = std::max(out.x, d.abs_dx);
        out.v = std::max(out.v, d.abs_dv);
    }
    return out;
}

double linf_control_gap(const ControlSignal& a, const ControlSignal& b, const SystemParams& params,
                        const GridSpec& grid) {
    double worst = 0.0;
    for (double t : sample_times(params, grid, a)) {
        worst = std::max(worst, std::abs(eval_control(a, params, t) - eval_control(b, params, t)));
        worst = std::max(worst, std::abs(eval_control_right(a, params, t) - eval_control_right(b, params, t)));
    }
    return worst;
}

bool is_sound(const BoundReport& r) {
    return r.measured_linf_x <= r.gronwall_bound && r.measured_linf_v <= r.gronwall_bound &&
           r.l2_gap_numeric <= r.l2_gap_bound;
}

BoundReport bound_report(const SystemParams& params, const Trajectory& continuous, const Trajectory& zoh,
                         const GridSpec& grid) {
    BoundReport r;
    r.k2 = k2_constant(kTrainLipschitz, params.stop_time());
    r.l2_gap_numeric =
        l2_control_gap_numeric(ControlSignal::linear_ramp(), ControlSignal::staircase_zoh(), params, grid);
    r.l2_gap_bound = l2_control_gap_bound(params);
    r.staircase_bound = staircase_gap_bound(params);
    r.k2_times_l2_numeric = r.k2 * r.l2_gap_numeric;
    r.gronwall_bound = gronwall_bound(params);
    const LinfDeviation measured = linf_deviation(continuous, zoh);
    r.measured_linf_x = measured.x;
    r.measured_linf_v = measured.v;
    r.sound = is_sound(r);
    return r;
}

std::vector<std::pair<std::string, double>> report_fields(const BoundReport& r) {
    return {
        {"k2", r.k2},
        {"l2_gap_numeric", r.l2_gap_numeric},
        {"l2_gap_bound", r.l2_gap_bound},
        {"staircase_bound", r.staircase_bound},
        {"k2_times_l2_numeric", r.k2_times_l2_numeric},
        {"gronwall_bound", r.gronwall_bound},
        {"measured_linf_x", r.measured_linf_x},
        {"measured_linf_v", r.measured_linf_v},
        {"sound", r.sound ? 1.0 : 0.0},
    };
}

void write_key_value(std::ostream& os, const BoundReport& report) {
    char buf[128];
    for (const auto& [name, value] : report_fields(report)) {
        if (name == "sound") {
            os << "sound = " << (report.sound ? "true" : "false") << '\n';
            continue;
        }
        std::snprintf(buf, sizeof buf, "%s = %.12g\n", name.c_str(), value);
        os << buf;
    }
}

void write_csv(std::ostream& os, const BoundReport& report) {
    os << "field,value\n";
    char buf[128];
    for (const auto& [name, value] : report_fields(report)) {
        std::snprintf(buf, sizeof buf, "%s,%.12g\n", name.c_str(), value);
        os << buf;
    }
}

}  // namespace stopctl::bounds
