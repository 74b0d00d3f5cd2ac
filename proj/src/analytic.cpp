#include "stopctl/analytic.hpp"

#include <cmath>
#include <sstream>

namespace stopctl::analytic {

namespace {

// Velocity at the start of period k: V - a_D T^2 (1 + 2 + ... + (k-1)).
double period_start_velocity(const SystemParams& p, std::int64_t k) {
    const double km1 = static_cast<double>(k - 1);
    const double T = p.hold_period();
    return p.initial_velocity() - p.discrete_jerk() * T * T * km1 * (km1 + 1.0) / 2.0;
}

// Position at the start of period k: sum over j < k of v_j T - j a_D T^3/2,
// with v_j = V - a_D T^2 (j-1)j/2. Closed form of that sum.
double period_start_position(const SystemParams& p, std::int64_t k) {
    const double m = static_cast<double>(k - 1);  // completed periods
    const double T = p.hold_period();
    const double ad = p.discrete_jerk();
    // sum_{j=1}^{m} (j-1) j / 2 = (m-1) m (m+1) / 6
    const double triangular_sum = (m - 1.0) * m * (m + 1.0) / 6.0;
    // sum_{j=1}^{m} j = m (m+1) / 2
    const double linear_sum = m * (m + 1.0) / 2.0;
    return p.initial_velocity() * T * m - ad * T * T * T * triangular_sum - 0.5 * ad * T * T * T * linear_sum;
}

}  // namespace

State continuous_state(const SystemParams& params, double t) {
    if (!std::isfinite(t) || t < 0.0 ||
        (t > params.stop_time() && t - params.stop_time() > kTimeSnapTolerance * params.stop_time())) {
        std::ostringstream msg;
        msg << "time " << t << " outside [0, " << params.stop_time() << "]";
        throw DomainError(msg.str());
    }
    const double a = params.jerk();
    const double V = params.initial_velocity();
    return State{V * t - a * t * t * t / 6.0, V - a * t * t / 2.0};
}

double continuous_stop_distance(const SystemParams& params) {
    return 2.0 / 3.0 * params.initial_velocity() * params.stop_time();
}

double discrete_velocity(const SystemParams& params, double t) {
    const std::int64_t k = period_index(params, t);
    const double dt = delta_t(params, t);
    return period_start_velocity(params, k) -
           static_cast<double>(k) * params.discrete_jerk() * params.hold_period() * dt;
}

double discrete_position(const SystemParams& params, double t) {
    const std::int64_t k = period_index(params, t);
    const double dt = delta_t(params, t);
    const double vk = period_start_velocity(params, k);
    return period_start_position(params, k) + vk * dt -
           0.5 * static_cast<double>(k) * params.discrete_jerk() * params.hold_period() * dt * dt;
}

State discrete_state(const SystemParams& params, double t) {
    return State{discrete_position(params, t), discrete_velocity(params, t)};
}

double discrete_stop_distance_bracket(const SystemParams& params) {
    const double n = static_cast<double>(params.periods());
    const double bracket = 1.0 - (2.0 * n * n + 3.0 * n + 1.0) / (6.0 * n * n + 6.0 * n);
    return params.initial_velocity() * params.stop_time() * bracket;
}

double discrete_stop_distance(const SystemParams& params) {
    const double n = static_cast<double>(params.periods());
    const double T = params.hold_period();
    const double cubic = 2.0 * n * n * n + 3.0 * n * n + n;
    const double series_form =
        params.initial_velocity() * params.stop_time() - params.discrete_jerk() * T * T * T * cubic / 12.0;
    const double bracket_form = discrete_stop_distance_bracket(params);
    const double scale = std::max(std::abs(series_form), std::abs(bracket_form));
    if (std::abs(series_form - bracket_form) > 1e-9 * scale) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "discrete stop distance forms disagree: " << series_form << " vs " << bracket_form;
        throw InvariantViolation(msg.str());
    }
    return series_form;
}

double exact_final_gap(const SystemParams& params) {
    const double n = static_cast<double>(params.periods());
    const double Ts = params.stop_time();
    return params.discrete_jerk() * params.hold_period() * Ts * Ts * (1.0 + 1.0 / n) / 12.0;
}

}  // namespace stopctl::analytic
