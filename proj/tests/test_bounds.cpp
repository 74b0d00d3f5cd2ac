#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "oracles.hpp"
#include "stopctl/analytic.hpp"
#include "stopctl/bounds.hpp"

using namespace stopctl;
using namespace stopctl::bounds;

namespace {
const SystemParams canonical = make_params(20.0, 10.0, 10);
const ControlSignal ramp = ControlSignal::linear_ramp();
const ControlSignal zoh = ControlSignal::staircase_zoh();
}  // namespace

TEST_CASE("K2 constant") {
    CHECK(k2_constant(kTrainLipschitz, 10.0) == doctest::Approx(std::exp(10.0) * std::sqrt(10.0)).epsilon(1e-15));
    CHECK(k2_constant(kTrainLipschitz, 10.0) == doctest::Approx(6.9654e4).epsilon(1e-4));
    CHECK(k2_constant({0.0, 1.0}, 4.0) == 2.0);
    CHECK(k2_constant(kTrainLipschitz, 0.0) == 0.0);
    CHECK(std::isinf(k2_constant(kTrainLipschitz, 1000.0)));
    CHECK(k2_constant({1.0, 0.0}, 1000.0) == 0.0);
    CHECK_THROWS_AS(k2_constant({-1.0, 1.0}, 1.0), DomainError);
    CHECK(LipschitzData{2.0, 1.0}.k_f_total(3.0) == 6.0);
}

TEST_CASE("staircase gap bound is attained at both ends") {
    const double bound = staircase_gap_bound(canonical);
    CHECK(bound == doctest::Approx(4.0 / 11.0).epsilon(1e-15));
    const double at_start = eval_control_right(ramp, canonical, 0.0) - eval_control_right(zoh, canonical, 0.0);
    const double at_end = eval_control(ramp, canonical, 10.0) - eval_control(zoh, canonical, 10.0);
    CHECK(at_start == doctest::Approx(bound).epsilon(1e-12));
    CHECK(at_end == doctest::Approx(-bound).epsilon(1e-12));
    CHECK(linf_control_gap(ramp, zoh, canonical, GridSpec{100}) == doctest::Approx(bound).epsilon(1e-12));
}

TEST_CASE("L2 control gap bound") {
    // (4/11) sqrt(10) = 1.1499191...
    CHECK(l2_control_gap_bound(canonical) == doctest::Approx(4.0 / 11.0 * std::sqrt(10.0)).epsilon(1e-15));
    CHECK(l2_control_gap_bound(canonical) == doctest::Approx(1.1499191).epsilon(1e-7));
    double previous = std::numeric_limits<double>::infinity();
    for (std::int64_t n = 1; n <= 256; n *= 2) {
        const double b = l2_control_gap_bound(make_params(20.0, 10.0, n));
        CHECK(b < previous);
        previous = b;
    }
}

TEST_CASE("numeric L2 gap against the exact antiderivative") {
    CHECK(l2_control_gap_numeric(ramp, ramp, canonical, GridSpec{10}) == 0.0);
    CHECK(l2_control_gap_numeric(zoh, zoh, canonical, GridSpec{10}) == 0.0);

    const double exact = oracle::l2_gap_exact({20.0, 10.0, 10});
    const double numeric = l2_control_gap_numeric(ramp, zoh, canonical, GridSpec{1000});
    CHECK(std::abs(numeric - exact) < 1e-6);
    CHECK(numeric <= 1.14996);
    CHECK(numeric <= l2_control_gap_bound(canonical) + 1e-6);
    const double doubled = l2_control_gap_numeric(ramp, zoh, canonical, GridSpec{2000});
    CHECK(std::abs(numeric - doubled) < 1e-6);
}

TEST_CASE("numeric L2 gap rejects signals that do not cover the horizon") {
    const auto short_table = ControlSignal::tabulated({0.0, 3.0}, {0.0});
    CHECK_THROWS_AS(l2_control_gap_numeric(ramp, short_table, canonical, GridSpec{}), UsageError);
}

TEST_CASE("numeric L2 gap with a tabulated signal uses its breakpoints") {
    const SystemParams p = make_params(10.0, 4.0, 2);
    const auto table = ControlSignal::tabulated({0.0, 0.7, 4.0}, {1.0, -1.0});
    const auto zero = ControlSignal::zero(4.0);
    // ||table||_2 = sqrt(0.7 * 1 + 3.3 * 1) = 2 exactly, regardless of grid.
    CHECK(l2_control_gap_numeric(table, zero, p, GridSpec{1}) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(l2_control_gap_numeric(zero, table, p, GridSpec{3}) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("Gronwall bound") {
    CHECK(gronwall_bound(canonical) == doctest::Approx(std::exp(10.0) * 40.0 / 11.0).epsilon(1e-15));
    CHECK(gronwall_bound(canonical) == doctest::Approx(8.0096e4).epsilon(1e-4));
    const double factored = k2_constant(kTrainLipschitz, 10.0) * l2_control_gap_bound(canonical);
    CHECK(std::abs(factored - gronwall_bound(canonical)) <= 8 * std::numeric_limits<double>::epsilon() * factored);
    CHECK(std::isinf(gronwall_bound(make_params(1.0, 800.0, 1))));
    CHECK(gronwall_bound(make_params(20.0, 10.0, 10'000'000)) < 1.0);
}

TEST_CASE("L-infinity deviation") {
    const Trajectory cont = integrate(canonical, ramp);
    const Trajectory disc = integrate(canonical, zoh);
    const LinfDeviation self = linf_deviation(cont, cont);
    CHECK(self.x == 0.0);
    CHECK(self.v == 0.0);
    const LinfDeviation pair = linf_deviation(cont, disc);
    CHECK(std::abs(pair.x - 10.0 / 3.0) <= 1e-6);
    CHECK(pair.x <= gronwall_bound(canonical));
    CHECK(pair.v <= gronwall_bound(canonical));
    CHECK_THROWS_AS(linf_deviation(cont, integrate(canonical, zoh, GridSpec{10})), UsageError);
}

TEST_CASE("x gap grows monotonically and peaks at T_stop") {
    const Trajectory cont = integrate(canonical, ramp, GridSpec{100});
    const Trajectory disc = integrate(canonical, zoh, GridSpec{100});
    double prev = 0.0;
    for (const Deviation& d : deviation_series(cont, disc)) {
        CHECK(d.abs_dx >= prev - 1e-12);
        prev = d.abs_dx;
    }
    CHECK(prev == doctest::Approx(analytic::exact_final_gap(canonical)).epsilon(1e-9));
}

TEST_CASE("bound report on the canonical pair") {
    const GridSpec grid{100};
    const BoundReport r =
        bound_report(canonical, integrate(canonical, ramp, grid), integrate(canonical, zoh, grid), grid);
    CHECK(r.sound);
    CHECK(r.k2 == doctest::Approx(6.9654e4).epsilon(1e-4));
    CHECK(r.gronwall_bound == doctest::Approx(8.0096e4).epsilon(1e-4));
    CHECK(r.measured_linf_x == doctest::Approx(10.0 / 3.0).epsilon(1e-9));
    CHECK(r.measured_linf_x <= r.k2_times_l2_numeric);
    CHECK(r.k2_times_l2_numeric <= r.gronwall_bound);

    BoundReport tampered = r;
    tampered.gronwall_bound = r.measured_linf_x / 2.0;
    CHECK_FALSE(is_sound(tampered));
}

TEST_CASE("bound report serialisation") {
    const GridSpec grid{10};
    const BoundReport r =
        bound_report(canonical, integrate(canonical, ramp, grid), integrate(canonical, zoh, grid), grid);
    std::ostringstream kv;
    write_key_value(kv, r);
    CHECK(kv.str().find("gronwall_bound = 80096.2392538\n") != std::string::npos);
    CHECK(kv.str().find("sound = true\n") != std::string::npos);
    std::ostringstream csv;
    write_csv(csv, r);
    const std::string text = csv.str();
    CHECK(text.rfind("field,value\nk2,69653.8007154\n", 0) == 0);
    CHECK(text.find("sound,1\n") != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 10);
}
