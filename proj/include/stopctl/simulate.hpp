#pragma once

// Fixed-step RK4 integration of x' = v, v' = u(t) on a grid that contains
// every hold breakpoint, so no step ever straddles a control discontinuity.

#include <iosfwd>
#include <vector>

#include "stopctl/model.hpp"

namespace stopctl {

/// Raised when integration produces a non-finite state.
class NumericBlowup : public std::runtime_error {
public:
    NumericBlowup(const std::string& what, double time) : std::runtime_error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Substeps per hold period; the step is h = T/m.
struct GridSpec {
    int substeps_per_period = 100;
};

struct Sample {
    double t = 0.0;
    State state;
};

/// Time-ordered states over [0, T_stop]. Every hold breakpoint kT is a sample time.
struct Trajectory {
    std::vector<Sample> samples;
    SystemParams params;
    int substeps_per_period = 1;

    const Sample& front() const { return samples.front(); }
    const Sample& back() const { return samples.back(); }
};

/// Sample times for (params, grid): m uniform steps inside every hold period,
/// plus any extra breakpoints of `signal`. Strictly increasing, 0 to T_stop.
std::vector<double> sample_times(const SystemParams& params, const GridSpec& grid,
                                 const ControlSignal& signal);

/// Integrates from (0, V) under `signal`. Stages at the start of a step use the
/// right limit of the signal, so each step sees only its own hold value.
Trajectory integrate(const SystemParams& params, const ControlSignal& signal, const GridSpec& grid = {});

/// As above from an arbitrary initial state.
Trajectory integrate(const SystemParams& params, const ControlSignal& signal, const GridSpec& grid,
                     const State& initial);

struct Deviation {
    double t = 0.0;
    double abs_dx = 0.0;
    double abs_dv = 0.0;
};

/// Pointwise |dx|, |dv|. Throws UsageError unless both share sample times.
std::vector<Deviation> deviation_series(const Trajectory& a, const Trajectory& b);

/// Throws UsageError unless a and b have the same sample times.
void require_same_grid(const Trajectory& a, const Trajectory& b);

/// CSV with header "t,x,v"; 12 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

namespace detail {

/// Uniform-step RK4 over [0, T_stop] that ignores breakpoints and evaluates
/// the control at raw stage times. Test support only: used to show that a
/// grid straddling hold discontinuities is detectably wrong.
Trajectory integrate_unaligned(const SystemParams& params, const ControlSignal& signal, int steps);

}  // namespace detail

}  // namespace stopctl
