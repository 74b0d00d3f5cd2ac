#include "stopctl/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <type_traits>

namespace stopctl {

namespace {

bool near_time(double a, double b) {
    return std::abs(a - b) <= kTimeSnapTolerance * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

void require_time(double t) {
    if (!std::isfinite(t) || t < 0.0) {
        std::ostringstream msg;
        msg << "time " << t << " outside [0, T_stop]";
        throw DomainError(msg.str());
    }
}

void require_within_horizon(const SystemParams& params, double t) {
    require_time(t);
    if (t > params.stop_time() && !near_time(t, params.stop_time())) {
        std::ostringstream msg;
        msg << "time " << t << " outside [0, " << params.stop_time() << "]";
        throw DomainError(msg.str());
    }
}

// Quotient t/T rounded to the nearest integer when it is within tolerance of one.
struct PeriodPosition {
    double quotient;
    std::int64_t nearest;
    bool on_boundary;
};

PeriodPosition locate(double hold_period, double t) {
    if (!std::isfinite(hold_period) || hold_period <= 0.0) {
        throw DomainError("hold period must be positive and finite");
    }
    require_time(t);
    const double q = t / hold_period;
    const double r = std::nearbyint(q);
    const bool on_boundary = std::abs(q - r) <= kTimeSnapTolerance * std::max(1.0, r);
    return {q, static_cast<std::int64_t>(r), on_boundary};
}

// Index of the tabulated piece holding t; `right` selects the right limit at knots.
std::size_t tabulated_piece(const Tabulated& table, double t, bool right) {
    const auto& knots = table.knots;
    const std::size_t pieces = table.values.size();
    if (t > knots.back() && !near_time(t, knots.back())) {
        std::ostringstream msg;
        msg << "time " << t << " beyond tabulated horizon " << knots.back();
        throw DomainError(msg.str());
    }
    // First interior knot that is not strictly before t (snapping near-equal times).
    std::size_t i = 1;
    while (i < knots.size() - 1 && knots[i] < t && !near_time(knots[i], t)) {
        ++i;
    }
    std::size_t piece = i - 1;
    if (right && i < knots.size() - 1 && near_time(knots[i], t)) {
        piece = i;
    }
    if (t == 0.0 || near_time(t, 0.0)) {
        piece = 0;
    }
    return std::min(piece, pieces - 1);
}

}  // namespace

SystemParams make_params(double velocity, double stop_time, std::int64_t periods) {
    if (!std::isfinite(velocity) || velocity <= 0.0) {
        throw DomainError("initial velocity must be positive and finite");
    }
    if (!std::isfinite(stop_time) || stop_time <= 0.0) {
        throw DomainError("stop time must be positive and finite");
    }
    if (periods < 1) {
        throw DomainError("number of hold periods must be at least 1");
    }
    SystemParams p;
    p.velocity_ = velocity;
    p.stop_time_ = stop_time;
    p.periods_ = periods;
    p.hold_period_ = stop_time / static_cast<double>(periods);
    const double n = static_cast<double>(periods);
    p.jerk_ = 2.0 * velocity / (stop_time * stop_time);
    p.discrete_jerk_ = 2.0 * velocity / (stop_time * stop_time * (1.0 + 1.0 / n));
    if (!std::isfinite(p.jerk_) || !std::isfinite(p.discrete_jerk_) || !std::isfinite(p.hold_period_) ||
        p.hold_period_ <= 0.0) {
        throw DomainError("derived constants are not finite");
    }
    return p;
}

std::int64_t period_index(double hold_period, double t) {
    const PeriodPosition pos = locate(hold_period, t);
    if (pos.on_boundary) {
        return std::max<std::int64_t>(1, pos.nearest);
    }
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(pos.quotient)));
}

std::int64_t period_index(const SystemParams& params, double t) {
    require_within_horizon(params, t);
    return std::min(period_index(params.hold_period(), t), params.periods());
}

double delta_t(double hold_period, double t) {
    const std::int64_t k = period_index(hold_period, t);
    if (t == 0.0) {
        return 0.0;
    }
    const PeriodPosition pos = locate(hold_period, t);
    if (pos.on_boundary && pos.nearest >= 1) {
        return hold_period;
    }
    const double elapsed = t - static_cast<double>(k - 1) * hold_period;
    return std::clamp(elapsed, 0.0, hold_period);
}

double delta_t(const SystemParams& params, double t) {
    require_within_horizon(params, t);
    return delta_t(params.hold_period(), t);
}

ControlSignal ControlSignal::tabulated(std::vector<double> knots, std::vector<double> values) {
    if (knots.size() < 2 || values.size() + 1 != knots.size()) {
        throw DomainError("tabulated signal needs n+1 knots for n values");
    }
    if (knots.front() != 0.0) {
        throw DomainError("tabulated signal must start at t = 0");
    }
    for (std::size_t i = 1; i < knots.size(); ++i) {
        if (!std::isfinite(knots[i]) || !(knots[i] > knots[i - 1])) {
            throw DomainError("tabulated knots must be finite and strictly increasing");
        }
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw DomainError("tabulated values must be finite");
        }
    }
    return ControlSignal{Tabulated{std::move(knots), std::move(values)}};
}

ControlSignal ControlSignal::zero(double stop_time) {
    return tabulated({0.0, stop_time}, {0.0});
}

std::string ControlSignal::name() const {
    return std::visit(
        [](const auto& s) -> std::string {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, LinearRamp>) {
                return "linear_ramp";
            } else if constexpr (std::is_same_v<S, StaircaseZoh>) {
                return "staircase_zoh";
            } else {
                return "tabulated";
            }
        },
        signal_);
}

std::vector<double> ControlSignal::breakpoints(const SystemParams& params) const {
    std::vector<double> out;
    if (std::holds_alternative<StaircaseZoh>(signal_)) {
        for (std::int64_t k = 1; k < params.periods(); ++k) {
            out.push_back(static_cast<double>(k) * params.hold_period());
        }
    } else if (const auto* table = std::get_if<Tabulated>(&signal_)) {
        for (std::size_t i = 1; i + 1 < table->knots.size(); ++i) {
            const double t = table->knots[i];
            if (t < params.stop_time() && !near_time(t, params.stop_time())) {
                out.push_back(t);
            }
        }
    }
    return out;
}

double ControlSignal::horizon() const {
    if (const auto* table = std::get_if<Tabulated>(&signal_)) {
        return table->knots.back();
    }
    return std::numeric_limits<double>::infinity();
}

double eval_control(const ControlSignal& signal, const SystemParams& params, double t) {
    require_within_horizon(params, t);
    return std::visit(
        [&](const auto& s) -> double {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, LinearRamp>) {
                return -params.jerk() * t;
            } else if constexpr (std::is_same_v<S, StaircaseZoh>) {
                const auto k = static_cast<double>(period_index(params, t));
                return -k * params.discrete_jerk() * params.hold_period();
            } else {
                return s.values[tabulated_piece(s, t, false)];
            }
        },
        signal.variant());
}

double eval_control_right(const ControlSignal& signal, const SystemParams& params, double t) {
    require_within_horizon(params, t);
    return std::visit(
        [&](const auto& s) -> double {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, LinearRamp>) {
                return -params.jerk() * t;
            } else if constexpr (std::is_same_v<S, StaircaseZoh>) {
                const PeriodPosition pos = locate(params.hold_period(), t);
                std::int64_t k = pos.on_boundary ? pos.nearest + 1
                                                 : static_cast<std::int64_t>(std::ceil(pos.quotient));
                k = std::clamp<std::int64_t>(k, 1, params.periods());
                return -static_cast<double>(k) * params.discrete_jerk() * params.hold_period();
            } else {
                return s.values[tabulated_piece(s, t, true)];
            }
        },
        signal.variant());
}

}  // namespace stopctl
