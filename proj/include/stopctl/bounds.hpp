#pragma once

// Deviation bounds between the continuous and ZOH trajectories:
//
//   ||x^u - x_D^{u_D}||_inf <= K2 ||u - u_D||_2,   K2 = e^{k_f T_stop} ||k_u||_2
//
// specialised to the train system, where k_f = k_u = 1 and the staircase
// stays within a_D T of the ramp, giving the explicit bound e^{T_stop} a_D T T_stop.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "stopctl/model.hpp"
#include "stopctl/simulate.hpp"

namespace stopctl::bounds {

/// Lipschitz data of the control law. k_f: w.r.t. the state [1/s]; k_u: w.r.t. the input.
struct LipschitzData {
    double k_f = 1.0;
    double k_u = 1.0;

    double k_f_total(double stop_time) const { return k_f * stop_time; }  ///< K_f = k_f T_stop
};

/// k_f = k_u = 1: the only nonzero partials of (v, u) are d/dv and d/du.
inline constexpr LipschitzData kTrainLipschitz{1.0, 1.0};

/// K2 = e^{k_f T_stop} k_u sqrt(T_stop). Overflows to +inf; k_u = 0 gives 0.
double k2_constant(const LipschitzData& lip, double stop_time);

/// a_D T: pointwise bound on |u(t) - u_D(t)|.
double staircase_gap_bound(const SystemParams& params);

/// a_D T sqrt(T_stop): L2 overestimate of u - u_D.
double l2_control_gap_bound(const SystemParams& params);

/// ||uA - uB||_2 over [0, T_stop] by composite trapezoid on the breakpoint-aligned
/// grid. Each interval uses the right limit at its left end.
double l2_control_gap_numeric(const ControlSignal& a, const ControlSignal& b, const SystemParams& params,
                              const GridSpec& grid);

/// e^{T_stop} a_D T T_stop. Overflows to +inf.
double gronwall_bound(const SystemParams& params);

struct LinfDeviation {
    double x = 0.0;
    double v = 0.0;
};

/// Per-component suprema of |a - b| over the shared samples.
LinfDeviation linf_deviation(const Trajectory& a, const Trajectory& b);

/// Max over the sample grid of |uA - uB|, taking both one-sided limits at every sample.
double linf_control_gap(const ControlSignal& a, const ControlSignal& b, const SystemParams& params,
                        const GridSpec& grid);

struct BoundReport {
    double k2 = 0.0;
    double l2_gap_numeric = 0.0;
    double l2_gap_bound = 0.0;
    double staircase_bound = 0.0;
    double k2_times_l2_numeric = 0.0;  ///< intermediate bound K2 ||u - u_D||_2
    double gronwall_bound = 0.0;
    double measured_linf_x = 0.0;
    double measured_linf_v = 0.0;
    bool sound = false;
};

/// The soundness predicate over a report's fields.
bool is_sound(const BoundReport& report);

/// Computes every bound for the given continuous/ZOH trajectory pair.
BoundReport bound_report(const SystemParams& params, const Trajectory& continuous, const Trajectory& zoh,
                         const GridSpec& grid);

/// Ordered (name, value) fields; `sound` is reported as 0/1.
std::vector<std::pair<std::string, double>> report_fields(const BoundReport& report);

/// "key = value" lines.
void write_key_value(std::ostream& os, const BoundReport& report);

/// "field,value" rows with header.
void write_csv(std::ostream& os, const BoundReport& report);

}  // namespace stopctl::bounds
