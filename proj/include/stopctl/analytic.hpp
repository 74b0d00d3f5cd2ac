#pragma once

// Closed-form solutions of the continuous and ZOH stopping models.

#include "stopctl/model.hpp"

namespace stopctl::analytic {

/// Exact continuous state: v(t) = V - a t^2/2, x(t) = V t - a t^3/6.
State continuous_state(const SystemParams& params, double t);

/// D = (2/3) V T_stop.
double continuous_stop_distance(const SystemParams& params);

/// v_D(t) = V - a_D T^2 (k-1)k/2 - k a_D T dt_k.
double discrete_velocity(const SystemParams& params, double t);

/// x_D(t): completed periods 1..k-1 plus the partial contribution of period k.
double discrete_position(const SystemParams& params, double t);

/// Both components of the exact ZOH solution.
State discrete_state(const SystemParams& params, double t);

/// D_D = V T_stop - a_D T^3 (2N^3 + 3N^2 + N)/12, cross-checked against
/// V T_stop [1 - (2N^2 + 3N + 1)/(6N^2 + 6N)]. Throws InvariantViolation if
/// the two forms disagree by more than 1e-9 relative.
double discrete_stop_distance(const SystemParams& params);

/// The bracket form V T_stop [1 - (2N^2 + 3N + 1)/(6N^2 + 6N)] on its own.
double discrete_stop_distance_bracket(const SystemParams& params);

/// |x(T_stop) - x_D(T_stop)| = a_D T T_stop^2 (1 + 1/N)/12, which simplifies to V T_stop/(6N).
double exact_final_gap(const SystemParams& params);

}  // namespace stopctl::analytic
