#pragma once

// Problem constants, control signals and hold-period bookkeeping for the
// stopping-train system and its zero-order-hold (ZOH) discretization.
//
// The continuous controller brakes with u(t) = -a t. The discretized one
// holds the control constant over each of N periods of length T, stepping
// down by a_D T at every period boundary: u_D(t) = -k a_D T on ((k-1)T, kT].

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace stopctl {

/// Raised when an argument lies outside the domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when two inputs that must agree (grids, spans) do not.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an internal cross-check fails; always signals a bug.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Scalar constants of one stopping problem. Only make_params() builds these,
/// so T_stop == N * T holds by construction.
class SystemParams {
public:
    double initial_velocity() const noexcept { return velocity_; }   ///< V [m/s]
    double stop_time() const noexcept { return stop_time_; }         ///< T_stop [s]
    std::int64_t periods() const noexcept { return periods_; }       ///< N
    double hold_period() const noexcept { return hold_period_; }     ///< T [s]
    double jerk() const noexcept { return jerk_; }                   ///< a [m/s^3]
    double discrete_jerk() const noexcept { return discrete_jerk_; } ///< a_D [m/s^3]

private:
    friend SystemParams make_params(double velocity, double stop_time, std::int64_t periods);
    SystemParams() = default;

    double velocity_ = 0.0;
    double stop_time_ = 0.0;
    std::int64_t periods_ = 1;
    double hold_period_ = 0.0;
    double jerk_ = 0.0;
    double discrete_jerk_ = 0.0;
};

/// Builds the constants for a train at `velocity` that must stop after
/// `stop_time` using `periods` hold periods. Sets T = T_stop/N,
/// a = 2V/T_stop^2 and a_D = 2V/(T_stop^2 (1 + 1/N)).
/// Throws DomainError for non-positive or non-finite inputs.
SystemParams make_params(double velocity, double stop_time, std::int64_t periods);

/// Kinematic state: position [m] and velocity [m/s].
struct State {
    double x = 0.0;
    double v = 0.0;

    friend bool operator==(const State&, const State&) = default;
};

/// Index k of the hold period containing t, i.e. ceil(t/T), with k = 1 at t = 0.
/// Times within a relative 1e-12 of a multiple of T are treated as that
/// multiple, so k*T computed in floating point maps back to period k.
std::int64_t period_index(double hold_period, double t);
/// As above, additionally rejecting t > T_stop.
std::int64_t period_index(const SystemParams& params, double t);

/// Time elapsed in the current hold period: t - (k-1)T with k = period_index.
/// Returns T (not 0) at t = kT for k >= 1, and 0 at t = 0.
double delta_t(double hold_period, double t);
double delta_t(const SystemParams& params, double t);

/// u(t) = -a t.
struct LinearRamp {};

/// u_D(t) = -k a_D T with k = period_index(T, t).
struct StaircaseZoh {};

/// Piecewise-constant signal: value[i] applies on (knots[i], knots[i+1]],
/// and value[0] also at knots[0] = 0.
struct Tabulated {
    std::vector<double> knots;
    std::vector<double> values;
};

/// An acceleration input u(t) on [0, T_stop]. Left-continuous at every
/// breakpoint, right-continuous at t = 0.
class ControlSignal {
public:
    using Variant = std::variant<LinearRamp, StaircaseZoh, Tabulated>;

    static ControlSignal linear_ramp() { return ControlSignal{LinearRamp{}}; }
    static ControlSignal staircase_zoh() { return ControlSignal{StaircaseZoh{}}; }
    /// Throws DomainError unless knots start at 0, strictly increase and
    /// values.size() + 1 == knots.size(), all finite.
    static ControlSignal tabulated(std::vector<double> knots, std::vector<double> values);
    /// The all-zero signal over [0, stop_time].
    static ControlSignal zero(double stop_time);

    const Variant& variant() const noexcept { return signal_; }
    std::string name() const;

    /// Interior discontinuity times within (0, T_stop), ascending.
    std::vector<double> breakpoints(const SystemParams& params) const;

    /// Last time at which the signal is defined (infinite for the analytic variants).
    double horizon() const;

private:
    explicit ControlSignal(Variant v) : signal_(std::move(v)) {}
    Variant signal_;
};

/// Value of the signal at t (left limit at breakpoints, right limit at 0).
/// Throws DomainError for t outside [0, T_stop].
double eval_control(const ControlSignal& signal, const SystemParams& params, double t);

/// Right limit u(t+). Equal to eval_control except at breakpoints.
double eval_control_right(const ControlSignal& signal, const SystemParams& params, double t);

/// Relative tolerance used when snapping times onto breakpoints and domain ends.
inline constexpr double kTimeSnapTolerance = 1e-12;

}  // namespace stopctl
