#pragma once

// Test-only reference computations. None of these call into the library's
// analytic or bounds code; they rebuild the ZOH solution period by period.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

struct Problem {
    double velocity;
    double stop_time;
    std::int64_t periods;

    double hold() const { return stop_time / static_cast<double>(periods); }
    double jerk() const { return 2.0 * velocity / (stop_time * stop_time); }
    double discrete_jerk() const {
        const double n = static_cast<double>(periods);
        return 2.0 * velocity / (stop_time * stop_time * (1.0 + 1.0 / n));
    }
};

struct Kinematics {
    double x;
    double v;
};

/// Walks the periods one by one, applying the constant hold acceleration
/// -j a_D T for elapsed time min(T, t - (j-1)T).
inline Kinematics zoh_by_periods(const Problem& p, double t) {
    const double T = p.hold();
    const double ad = p.discrete_jerk();
    double x = 0.0;
    double v = p.velocity;
    for (std::int64_t j = 1; j <= p.periods; ++j) {
        const double start = static_cast<double>(j - 1) * T;
        if (t <= start) {
            break;
        }
        const double dt = std::min(T, t - start);
        const double u = -static_cast<double>(j) * ad * T;
        x += v * dt + 0.5 * u * dt * dt;
        v += u * dt;
    }
    return {x, v};
}

/// Exact ||u - u_D||_2 from the per-period antiderivative of (k a_D T - a t)^2.
inline double l2_gap_exact(const Problem& p) {
    const double T = p.hold();
    const double a = p.jerk();
    const double ad = p.discrete_jerk();
    double integral = 0.0;
    for (std::int64_t k = 1; k <= p.periods; ++k) {
        const double c = static_cast<double>(k) * ad * T;
        const double t0 = static_cast<double>(k - 1) * T;
        const double t1 = static_cast<double>(k) * T;
        const double e0 = c - a * t0;
        const double e1 = c - a * t1;
        integral += (e0 * e0 * e0 - e1 * e1 * e1) / (3.0 * a);
    }
    return std::sqrt(integral);
}

/// Fixed-seed generator over V in [1,50], T_stop in [1,12], N in [1,64].
class ProblemSweep {
public:
    explicit ProblemSweep(std::uint64_t seed = 20261016) : rng_(seed) {}

    Problem next() {
        std::uniform_real_distribution<double> v(1.0, 50.0);
        std::uniform_real_distribution<double> ts(1.0, 12.0);
        std::uniform_int_distribution<std::int64_t> n(1, 64);
        const double vv = v(rng_);
        const double tt = ts(rng_);
        return Problem{vv, tt, n(rng_)};
    }

    std::vector<Problem> take(std::size_t count) {
        std::vector<Problem> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            out.push_back(next());
        }
        return out;
    }

private:
    std::mt19937_64 rng_;
};

inline bool close_rel(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace oracle
