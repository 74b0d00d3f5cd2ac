#include "stopctl/simulate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace stopctl {

namespace {

using Vec2 = std::array<double, 2>;

// State derivative of x' = v, v' = u.
Vec2 rhs(const Vec2& y, double u) { return {y[1], u}; }

Vec2 axpy(const Vec2& y, double h, const Vec2& k) { return {y[0] + h * k[0], y[1] + h * k[1]}; }

// One classical RK4 step with the control sampled at the three stage times.
Vec2 rk4_step(const Vec2& y, double h, double u_start, double u_mid, double u_end) {
    const Vec2 k1 = rhs(y, u_start);
    const Vec2 k2 = rhs(axpy(y, h / 2.0, k1), u_mid);
    const Vec2 k3 = rhs(axpy(y, h / 2.0, k2), u_mid);
    const Vec2 k4 = rhs(axpy(y, h, k3), u_end);
    return {y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
}

void check_finite(const Vec2& y, double t) {
    if (!std::isfinite(y[0]) || !std::isfinite(y[1])) {
        std::ostringstream msg;
        msg << "non-finite state at t = " << t;
        throw NumericBlowup(msg.str(), t);
    }
}

bool same_time(double a, double b) {
    return std::abs(a - b) <= kTimeSnapTolerance * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace

std::vector<double> sample_times(const SystemParams& params, const GridSpec& grid,
                                 const ControlSignal& signal) {
    if (grid.substeps_per_period < 1) {
        throw DomainError("substeps per period must be at least 1");
    }
    const double horizon = signal.horizon();
    if (horizon < params.stop_time() && !same_time(horizon, params.stop_time())) {
        throw UsageError("control signal " + signal.name() + " does not cover [0, T_stop]");
    }
    const std::int64_t n = params.periods();
    const int m = grid.substeps_per_period;
    const double T = params.hold_period();

    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(m) + 1);
    for (std::int64_t k = 1; k <= n; ++k) {
        const double start = static_cast<double>(k - 1) * T;
        const double end = k == n ? params.stop_time() : static_cast<double>(k) * T;
        const double h = (end - start) / m;
        for (int j = 0; j < m; ++j) {
            times.push_back(start + j * h);
        }
    }
    times.push_back(params.stop_time());

    const std::vector<double> extra = signal.breakpoints(params);
    if (!extra.empty()) {
        std::vector<double> merged;
        merged.reserve(times.size() + extra.size());
        std::merge(times.begin(), times.end(), extra.begin(), extra.end(), std::back_inserter(merged));
        times.clear();
        for (double t : merged) {
            if (times.empty() || !same_time(times.back(), t)) {
                times.push_back(t);
            }
        }
    }
    return times;
}

Trajectory integrate(const SystemParams& params, const ControlSignal& signal, const GridSpec& grid) {
    return integrate(params, signal, grid, State{0.0, params.initial_velocity()});
}

Trajectory integrate(const SystemParams& params, const ControlSignal& signal, const GridSpec& grid,
                     const State& initial) {
    const std::vector<double> times = sample_times(params, grid, signal);

    Trajectory traj{{}, params, grid.substeps_per_period};
    traj.samples.reserve(times.size());
    Vec2 y{initial.x, initial.v};
    check_finite(y, 0.0);
    traj.samples.push_back({times.front(), initial});
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double t0 = times[i - 1];
        const double t1 = times[i];
        const double h = t1 - t0;
        y = rk4_step(y, h, eval_control_right(signal, params, t0), eval_control(signal, params, t0 + h / 2.0),
                     eval_control(signal, params, t1));
        check_finite(y, t1);
        traj.samples.push_back({t1, State{y[0], y[1]}});
    }
    return traj;
}

void require_same_grid(const Trajectory& a, const Trajectory& b) {
    if (a.samples.size() != b.samples.size()) {
        throw UsageError("trajectories have different sample counts");
    }
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        if (!same_time(a.samples[i].t, b.samples[i].t)) {
            std::ostringstream msg;
            msg << "trajectories disagree on sample time " << i << ": " << a.samples[i].t << " vs "
                << b.samples[i].t;
            throw UsageError(msg.str());
        }
    }
}

std::vector<Deviation> deviation_series(const Trajectory& a, const Trajectory& b) {
    require_same_grid(a, b);
    std::vector<Deviation> out;
    out.reserve(a.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        const State& sa = a.samples[i].state;
        const State& sb = b.samples[i].state;
        out.push_back({a.samples[i].t, std::abs(sa.x - sb.x), std::abs(sa.v - sb.v)});
    }
    return out;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "t,x,v\n";
    char line[96];
    for (const Sample& s : traj.samples) {
        std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g\n", s.t, s.state.x, s.state.v);
        os << line;
    }
}

namespace detail {

Trajectory integrate_unaligned(const SystemParams& params, const ControlSignal& signal, int steps) {
    if (steps < 1) {
        throw DomainError("step count must be at least 1");
    }
    Trajectory traj{{}, params, 0};
    const double h = params.stop_time() / steps;
    Vec2 y{0.0, params.initial_velocity()};
    traj.samples.push_back({0.0, State{y[0], y[1]}});
    for (int i = 0; i < steps; ++i) {
        const double t0 = i * h;
        const double t1 = i + 1 == steps ? params.stop_time() : (i + 1) * h;
        y = rk4_step(y, t1 - t0, eval_control(signal, params, t0), eval_control(signal, params, t0 + h / 2.0),
                     eval_control(signal, params, t1));
        check_finite(y, t1);
        traj.samples.push_back({t1, State{y[0], y[1]}});
    }
    return traj;
}

}  // namespace detail

}  // namespace stopctl
